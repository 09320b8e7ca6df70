// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/ibc_core.hpp"

#include <algorithm>
#include <set>

#include "ibc/random.hpp"

namespace ibc {

namespace {

void require_coupling(const HermitianSplit& split, const CMatrix& N, double hbar) {
  if (N.rows() != split.dim()) throw DimensionError("N must have one row per component of E_q");
  if (!(hbar > 0.0)) throw PreconditionError("hbar must be positive");
  if (!all_finite(N)) throw PreconditionError("N has non-finite entries");
}

CMatrix eigen_frame(const HermitianSplit& split) {
  CMatrix v(split.dim(), split.dim());
  v << split.basis_plus, split.basis_minus, split.basis_zero;
  return v;
}

/// [[top_left, coupling], [coupling^dag, bottom_right]] with exact symmetry.
CMatrix hermitian_blocks(const CMatrix& top_left, const CMatrix& coupling, const CMatrix& bottom_right) {
  const Eigen::Index n = top_left.rows();
  const Eigen::Index m = bottom_right.rows();
  CMatrix out(n + m, n + m);
  out.topLeftCorner(n, n) = hermitian_part(top_left);
  out.topRightCorner(n, m) = coupling;
  out.bottomLeftCorner(m, n) = coupling.adjoint();
  out.bottomRightCorner(m, m) = hermitian_part(bottom_right);
  return out;
}

CMatrix coupling_flux(const HermitianSplit& split, const CMatrix& N) { return N.adjoint() * split.Ainv * N; }

}  // namespace

CMatrix block_frame(const HermitianSplit& split, int dim_target) {
  const int r = split.dim();
  CMatrix w = CMatrix::Zero(r + dim_target, r + dim_target);
  w.topLeftCorner(r, r) = eigen_frame(split);
  w.bottomRightCorner(dim_target, dim_target).setIdentity();
  return w;
}

CMatrix a_tilde(const HermitianSplit& split, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  const int r = split.dim();
  RVector diag(r);
  diag << split.Aplus.diagonal().real(), split.Aminus.diagonal().real(), RVector::Zero(split.dim_zero());
  const CMatrix top_left = diag.cast<cplx>().asDiagonal();
  const CMatrix coupling = (kI / hbar) * eigen_frame(split).adjoint() * N;
  return hermitian_blocks(top_left, coupling, CMatrix::Zero(N.cols(), N.cols()));
}

CMatrix a_hat(const HermitianSplit& split, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  const int d0 = split.dim_zero();
  const CMatrix coupling = (kI / hbar) * split.basis_zero.adjoint() * N;
  return hermitian_blocks(CMatrix::Zero(d0, d0), coupling, -coupling_flux(split, N) / (hbar * hbar));
}

CMatrix f_tilde(const HermitianSplit& split, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  const int r = split.dim();
  const int dp = split.dim_plus();
  const int dm = split.dim_minus();
  const Eigen::Index rf = N.cols();
  CMatrix f = CMatrix::Identity(r + rf, r + rf);
  const CMatrix inv_plus = split.Aplus.diagonal().cwiseInverse().asDiagonal();
  const CMatrix inv_minus = split.Aminus.diagonal().cwiseInverse().asDiagonal();
  f.block(0, r, dp, rf) = (-kI / hbar) * inv_plus * split.basis_plus.adjoint() * N;
  f.block(dp, r, dm, rf) = (-kI / hbar) * inv_minus * split.basis_minus.adjoint() * N;
  return f;
}

CMatrix a_prime(const TildeForm& tf) { return tf.Ftilde.adjoint() * tf.Atilde * tf.Ftilde; }

double a_prime_off_block_norm(const TildeForm& tf, const HermitianSplit& split) {
  CMatrix off = tf.Aprime;
  const int dp = split.dim_plus();
  const int dm = split.dim_minus();
  const auto rest = off.rows() - dp - dm;
  off.block(0, 0, dp, dp).setZero();
  off.block(dp, dp, dm, dm).setZero();
  off.block(dp + dm, dp + dm, rest, rest).setZero();
  return off.norm();
}

TildeForm tilde_form(const HermitianSplit& split, const CMatrix& N, double hbar) {
  TildeForm tf;
  tf.Atilde = a_tilde(split, N, hbar);
  tf.Ahat = a_hat(split, N, hbar);
  tf.Ftilde = f_tilde(split, N, hbar);
  tf.Aprime = a_prime(tf);
  tf.frame = block_frame(split, static_cast<int>(N.cols()));
  tf.hat_split = hermitian_split(tf.Ahat);
  return tf;
}

CMatrix a_tilde_natural(const HermitianSplit& split, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  return hermitian_blocks(split.A, (kI / hbar) * N, CMatrix::Zero(N.cols(), N.cols()));
}

CMatrix f_tilde_natural(const HermitianSplit& split, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  const int r = split.dim();
  const Eigen::Index rf = N.cols();
  CMatrix f = CMatrix::Identity(r + rf, r + rf);
  f.topRightCorner(r, rf) = (-kI / hbar) * split.Ainv * N;
  return f;
}

CMatrix a_prime_natural(const HermitianSplit& split, const CMatrix& N, double hbar) {
  const CMatrix f = f_tilde_natural(split, N, hbar);
  return hermitian_part(f.adjoint() * a_tilde_natural(split, N, hbar) * f);
}

CMatrix padded_ltilde(const IbcSpec& spec) {
  const int r = spec.dim_q();
  const int n = r + spec.dim_target();
  if (spec.Ltilde.rows() == n && spec.Ltilde.cols() == n) return spec.Ltilde;
  if (spec.Ltilde.rows() == r && spec.Ltilde.cols() == r) {
    CMatrix out = CMatrix::Zero(n, n);
    out.topLeftCorner(r, r) = spec.Ltilde;
    return out;
  }
  throw DimensionError("Ltilde must be " + std::to_string(n) + "x" + std::to_string(n) + " or " +
                       std::to_string(r) + "x" + std::to_string(r));
}

Subspace tilde_subspace(const IbcSpec& spec, double tol) {
  const HermitianSplit prime = hermitian_split(a_prime_natural(spec.split, spec.N, spec.hbar));
  if (!prime.balanced())
    throw SignatureError("dim(E+ + Ehat+) = " + std::to_string(prime.dim_plus()) +
                         " differs from dim(E- + Ehat-) = " + std::to_string(prime.dim_minus()));
  const Subspace s_prime = subspace_from_unitary(padded_ltilde(spec), prime, tol);
  return s_prime.mapped(f_tilde_natural(spec.split, spec.N, spec.hbar));
}

CMatrix ltilde_from_subspace(const Subspace& s, const HermitianSplit& split, const CMatrix& N, double hbar) {
  CMatrix f_inv = f_tilde_natural(split, N, hbar);
  const int r = split.dim();
  f_inv.topRightCorner(r, N.cols()) *= -1.0;
  const HermitianSplit prime = hermitian_split(a_prime_natural(split, N, hbar));
  return unitary_from_subspace(s.mapped(f_inv), prime);
}

SimpleConditions check_simple_conditions(const HermitianSplit& split, const CMatrix& N, double tol) {
  if (N.rows() != split.dim()) throw DimensionError("N must have one row per component of E_q");
  const double scale = std::max(1.0, max_abs(N));
  SimpleConditions c;
  c.p0n_norm = max_abs(split.P0 * N);
  c.coupling_flux_norm = max_abs(coupling_flux(split, N));
  c.p0n_zero = c.p0n_norm <= tol * scale;
  c.coupling_flux_zero = c.coupling_flux_norm <= tol * scale * scale;
  return c;
}

CMatrix integrated_coupling_flux(std::span<const CMatrix> Ns, std::span<const double> weights,
                                 std::span<const CMatrix> An) {
  if (Ns.size() != weights.size() || Ns.size() != An.size())
    throw DimensionError("integrated_coupling_flux: one weight and one A^n per node");
  if (Ns.empty()) return CMatrix(0, 0);
  CMatrix sum = CMatrix::Zero(Ns[0].cols(), Ns[0].cols());
  for (std::size_t i = 0; i < Ns.size(); ++i) sum += weights[i] * Ns[i].adjoint() * An[i] * Ns[i];
  return sum;
}

SimpleIbc simple_ibc_constraint(const HermitianSplit& split, const CMatrix& L, const CMatrix& N, double hbar) {
  require_coupling(split, N, hbar);
  if (unitarity_defect(L, split) > kSubspaceTol) throw NotUnitaryError("L is not a unitary map E+ -> E-");
  SimpleIbc out;
  out.R = r_matrix(L, split);
  out.M = (-kI / hbar) * out.R * split.Ainv * N;
  const SimpleConditions c = check_simple_conditions(split, N);
  if (!c.p0n_zero)
    out.warnings.push_back("P0 N != 0 (max " + std::to_string(c.p0n_norm) + "); probability is not conserved");
  if (!c.coupling_flux_zero)
    out.warnings.push_back("N^dag A^inv N != 0 (max " + std::to_string(c.coupling_flux_norm) +
                           "); probability is not conserved");
  return out;
}

Subspace simple_ibc_subspace(const SimpleIbc& ibc) {
  CMatrix rows(ibc.R.rows(), ibc.R.cols() + ibc.M.cols());
  rows << ibc.R, -ibc.M;
  return Subspace::kernel_of(rows);
}

double local_conservation_residual(const CVector& psi_q, const CVector& psi_star, const CMatrix& N,
                                   const CMatrix& An, double hbar) {
  if (N.rows() != psi_q.size() || N.cols() != psi_star.size() || An.rows() != psi_q.size() ||
      An.cols() != psi_q.size())
    throw DimensionError("local_conservation_residual: dimension mismatch");
  const cplx coupling = psi_star.dot(N.adjoint() * psi_q);
  const cplx flux = psi_q.dot(An * psi_q);
  return 2.0 / hbar * coupling.imag() + flux.real();
}

ProjectorFormReport compare_projector_forms(const SpinRep& rep, std::span<const double> n, const CMatrix& N, double hbar,
                              int samples, std::uint64_t seed) {
  if (rep.space_dim() != 3 || n.size() != 3) throw DimensionError("compare_projector_forms needs a 3d representation");
  const int r = rep.dim;
  if (N.rows() != r) throw DimensionError("N must have one row per spinor component");
  const Eigen::Index rf = N.cols();
  CMatrix gamma_n = CMatrix::Zero(r, r);
  for (std::size_t k = 0; k < 3; ++k) gamma_n += n[k] * rep.gammas[k];
  const CMatrix alpha_n = normal_matrix(rep.alphas, n);
  const CMatrix id = CMatrix::Identity(r, r);
  const CMatrix g = gamma_n - kI * id;
  const CMatrix p_minus = 0.5 * (id + kI * gamma_n);

  CMatrix first(r, r + rf);
  first << g, (kI / hbar) * g * alpha_n * N;
  CMatrix second(r, r + rf);
  second << p_minus, (kI / hbar) * p_minus * alpha_n * N;

  const Subspace s1 = Subspace::kernel_of(first);
  const Subspace s2 = Subspace::kernel_of(second);

  ProjectorFormReport rep_out;
  rep_out.seed = seed;
  rep_out.samples = samples;
  rep_out.projector_distance = projector_distance(s1, s2);

  Rng rng(seed);
  const double member_tol = 1e-9;
  for (int s = 0; s < samples; ++s) {
    // Members of the first set, then generic pairs.
    const CVector member = s1.basis() * random_gaussian_vector(rng, s1.dim());
    const double res2 = (second * member).norm() / std::max(1.0, member.norm());
    rep_out.max_member_residual = std::max(rep_out.max_member_residual, res2);
    if (res2 > member_tol) ++rep_out.disagreements;

    const CVector generic = random_gaussian_vector(rng, static_cast<int>(r + rf));
    const bool in1 = (first * generic).norm() <= member_tol * generic.norm();
    const bool in2 = (second * generic).norm() <= member_tol * generic.norm();
    if (in1 != in2) ++rep_out.disagreements;
  }
  rep_out.equivalent = rep_out.projector_distance <= kSubspaceTol && rep_out.disagreements == 0;
  return rep_out;
}

bool projector_forms_equivalent(const SpinRep& rep, std::span<const double> n, const CMatrix& N, double hbar,
                               int samples, std::uint64_t seed) {
  return compare_projector_forms(rep, n, N, hbar, samples, seed).equivalent;
}

json ibc_spec_to_json(const IbcSpec& spec) {
  return json{{"An", matrix_to_json(spec.split.A)},
              {"N", matrix_to_json(spec.N)},
              {"hbar", spec.hbar},
              {"Ltilde", matrix_to_json(spec.Ltilde)},
              {"block_order", kBlockOrder}};
}

IbcSpec ibc_spec_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("IBC spec must be an object");
  static const std::set<std::string> allowed = {"An", "N", "hbar", "Ltilde", "block_order"};
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw SchemaError("unknown field in IBC spec: " + key);
  for (const char* key : {"An", "N", "Ltilde"})
    if (!j.contains(key)) throw SchemaError(std::string("IBC spec needs '") + key + "'");
  if (j.contains("block_order") && j.at("block_order") != json(kBlockOrder))
    throw SchemaError("block_order must be [\"plus\",\"minus\",\"zero\",\"star\"]");
  IbcSpec spec;
  spec.split = hermitian_split(matrix_from_json(j.at("An")));
  spec.N = matrix_from_json(j.at("N"));
  if (j.contains("hbar")) {
    if (!j.at("hbar").is_number()) throw SchemaError("hbar must be a number");
    spec.hbar = j.at("hbar").get<double>();
  }
  if (!(spec.hbar > 0.0)) throw SchemaError("hbar must be positive");
  spec.Ltilde = matrix_from_json(j.at("Ltilde"));
  if (spec.N.rows() != spec.split.dim()) throw SchemaError("N must have as many rows as An");
  padded_ltilde(spec);
  return spec;
}

}  // namespace ibc
