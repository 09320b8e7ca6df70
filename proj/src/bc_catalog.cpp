// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/bc_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ibc {

namespace {

cplx phase(double x) { return std::polar(1.0, x); }

CMatrix unit_matrix(int n, int row, int col, cplx value) {
  CMatrix m = CMatrix::Zero(n, n);
  m(row, col) = value;
  return m;
}

}  // namespace

ReflectingBC mit_bag(const SpinRep& rep, std::span<const double> n) {
  if (rep.gammas.size() != n.size())
    throw DimensionError("mit_bag: normal dimension does not match the representation");
  CMatrix gamma_n = CMatrix::Zero(rep.dim, rep.dim);
  for (std::size_t k = 0; k < n.size(); ++k) gamma_n += n[k] * rep.gammas[k];
  HermitianSplit split = hermitian_split(normal_matrix(rep.alphas, n));
  const Subspace s = Subspace::kernel_of(gamma_n - kI * CMatrix::Identity(rep.dim, rep.dim));
  return reflecting_bc_from_subspace(std::move(split), s);
}

ReflectingBC interval_wall(bool left, double phase_angle) {
  const CMatrix a = left ? pauli(3) : CMatrix(-pauli(3));
  HermitianSplit split = hermitian_split(a);
  // Components are (psi_-, psi_+); psi_+ = e^{i phase} psi_-.
  // Left wall: E- is the psi_+ slot. Right wall: E- is the psi_- slot.
  CMatrix L = left ? unit_matrix(2, 1, 0, phase(phase_angle)) : unit_matrix(2, 0, 1, phase(-phase_angle));
  return make_reflecting_bc(std::move(split), std::move(L));
}

std::pair<ReflectingBC, ReflectingBC> interval_conditions(double theta, double phi) {
  return {interval_wall(true, theta), interval_wall(false, phi)};
}

CMatrix AhwT::matrix() const {
  CMatrix t(2, 2);
  t << a, b, std::conj(b), c;
  return t;
}

cplx ahw_denominator(const AhwT& t) {
  return (1.0 + kI * t.a) * (1.0 + kI * t.c) + std::norm(t.b);
}

CMatrix ahw_compact_l(const AhwT& t) {
  const cplx den = ahw_denominator(t);
  const double b2 = std::norm(t.b);
  CMatrix l(2, 2);
  // The (1,1) entry carries -2ib; with +2ib the map is not unitary.
  l << -2.0 * kI * t.b, (1.0 - kI * t.a) * (1.0 + kI * t.c) - b2,
      (1.0 + kI * t.a) * (1.0 - kI * t.c) - b2, -2.0 * kI * std::conj(t.b);
  return l / den;
}

HermitianSplit weyl_alpha3_split() { return hermitian_split(weyl_rep().alphas[2]); }

CMatrix compact_from_ambient_l(const CMatrix& L) {
  if (L.rows() != 4 || L.cols() != 4) throw DimensionError("expected a 4x4 L");
  CMatrix c(2, 2);
  c << L(0, 1), L(0, 2), L(3, 1), L(3, 2);
  return c;
}

CMatrix ambient_from_compact_l(const CMatrix& compact) {
  if (compact.rows() != 2 || compact.cols() != 2) throw DimensionError("expected a 2x2 L");
  CMatrix L = CMatrix::Zero(4, 4);
  L(0, 1) = compact(0, 0);
  L(0, 2) = compact(0, 1);
  L(3, 1) = compact(1, 0);
  L(3, 2) = compact(1, 1);
  return L;
}

ReflectingBC ahw_from_t(const AhwT& t) {
  return make_reflecting_bc(weyl_alpha3_split(), ambient_from_compact_l(ahw_compact_l(t)));
}

UnitaryAngles decompose_unitary2(const CMatrix& l) {
  constexpr double eps = 1e-9;
  UnitaryAngles ang;
  ang.zeta = std::acos(std::clamp(std::abs(l(0, 0)), 0.0, 1.0));
  const double c = std::cos(ang.zeta);
  const double s = std::sin(ang.zeta);
  if (c > eps) ang.eta = std::arg(l(0, 0));
  if (s > eps) {
    ang.kappa = std::arg(l(0, 1));
    ang.tau = std::arg(l(1, 0));
  } else {
    ang.tau = std::arg(-l(1, 1)) + ang.eta;
  }
  return ang;
}

CMatrix compose_unitary2(const UnitaryAngles& a) {
  const double c = std::cos(a.zeta);
  const double s = std::sin(a.zeta);
  CMatrix l(2, 2);
  l << c * phase(a.eta), s * phase(a.kappa), s * phase(a.tau), -c * phase(a.kappa + a.tau - a.eta);
  return l;
}

AhwInverse ahw_to_t(const ReflectingBC& bc) {
  if (bc.split.dim() != 4 || max_abs(bc.split.A - weyl_rep().alphas[2]) > 1e-12)
    throw PreconditionError("ahw_to_t: boundary condition is not over the Weyl alpha^3 split");
  const CMatrix l = compact_from_ambient_l(bc.L);
  AhwInverse out;
  out.angles = decompose_unitary2(l);
  const cplx det = l.determinant();
  out.n_prime = 1.0 + l(0, 1) + l(1, 0) - det;
  if (std::abs(out.n_prime) <= kNoTTol) return out;

  CMatrix t(2, 2);
  t << 1.0 + l(1, 0) - l(0, 1) + det, -2.0 * l(0, 0), -2.0 * l(1, 1), 1.0 - l(1, 0) + l(0, 1) + det;
  t *= -kI / out.n_prime;
  out.t = AhwT{t(0, 0).real(), 0.5 * (t(0, 1) + std::conj(t(1, 0))), t(1, 1).real()};
  return out;
}

ReflectingBC benguria(double eta) {
  return make_reflecting_bc(hermitian_split(pauli(3)), unit_matrix(2, 1, 0, phase(eta)));
}

CMatrix lienert_normal_matrix() {
  const auto alphas = tensor_alphas(one_d_rep(), 2);
  const double n[2] = {-1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  return normal_matrix(alphas, n);
}

ReflectingBC lienert_two_particle(double theta) {
  return make_reflecting_bc(hermitian_split(lienert_normal_matrix()), unit_matrix(4, 1, 2, phase(theta)));
}

double PlaneWaveProblem::energy() const {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  return std::sqrt(m * m + hbar * hbar * k2);
}

CMatrix positive_energy_basis(const SpinRep& rep, const std::array<double, 3>& k, double m, double hbar) {
  if (rep.space_dim() != 3) throw DimensionError("plane waves need a 3d representation");
  if (m == 0.0 && k[0] == 0.0 && k[1] == 0.0 && k[2] == 0.0)
    throw PreconditionError("plane wave with m = 0 and k = 0 has no energy gap");
  CMatrix h = m * rep.beta;
  for (int a = 0; a < 3; ++a) h += hbar * k[static_cast<std::size_t>(a)] * rep.alphas[static_cast<std::size_t>(a)];
  return hermitian_split(h).basis_plus;
}

namespace {

/// Rows of R spanning its row space, so that R psi = 0 becomes a square
/// system when rank R equals the number of unknowns.
CMatrix row_reduced(const CMatrix& r) {
  const CMatrix w = range_basis(r);
  return w.adjoint() * r;
}

}  // namespace

Reflection reflect_plane_wave(const PlaneWaveProblem& p, const CVector& u) {
  const CMatrix u_basis = positive_energy_basis(p.rep, p.k_incoming(), p.m, p.hbar);
  const CMatrix v_basis = positive_energy_basis(p.rep, p.k, p.m, p.hbar);
  if (u.size() != u_basis.rows()) throw DimensionError("reflect_plane_wave: spinor has wrong size");
  if ((u - u_basis * (u_basis.adjoint() * u)).norm() > 1e-9 * std::max(1.0, u.norm()))
    throw PreconditionError("incoming spinor is not a positive-energy eigenvector for k'");

  const CMatrix r = row_reduced(p.bc.R);
  const CMatrix system = r * v_basis;
  if (system.rows() != system.cols())
    throw SingularSystemError("boundary condition does not fix the reflected amplitude uniquely");
  Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0)))
    throw SingularSystemError("reflection system is singular");

  Reflection out;
  const CVector coeffs = svd.solve(CVector(-r * u));
  out.v = v_basis * coeffs;
  const CVector total = u + out.v;
  out.constraint_residual = (p.bc.R * total).norm();
  out.total_flux = (total.adjoint() * p.bc.split.A * total)(0, 0).real();
  return out;
}

CMatrix reflection_matrix(const PlaneWaveProblem& p) {
  const CMatrix u_basis = positive_energy_basis(p.rep, p.k_incoming(), p.m, p.hbar);
  const CMatrix v_basis = positive_energy_basis(p.rep, p.k, p.m, p.hbar);
  CMatrix out(v_basis.cols(), u_basis.cols());
  for (Eigen::Index j = 0; j < u_basis.cols(); ++j)
    out.col(j) = v_basis.adjoint() * reflect_plane_wave(p, u_basis.col(j)).v;
  return out;
}

json ahw_t_to_json(const AhwT& t) {
  return json{{"a", t.a}, {"b", {t.b.real(), t.b.imag()}}, {"c", t.c}};
}

AhwT ahw_t_from_json(const json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("c"))
    throw SchemaError("T needs fields a, b, c");
  AhwT t;
  t.a = j.at("a").get<double>();
  t.c = j.at("c").get<double>();
  const json& b = j.at("b");
  if (b.is_number())
    t.b = {b.get<double>(), 0.0};
  else if (b.is_array() && b.size() == 2)
    t.b = {b[0].get<double>(), b[1].get<double>()};
  else
    throw SchemaError("T.b must be a number or [re, im]");
  return t;
}

}  // namespace ibc
