// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ibc/bc_catalog.hpp"
#include "ibc/ibc_core.hpp"
#include "ibc/random.hpp"
#include "ibc/sector_sim.hpp"
#include "oracles.hpp"

using namespace ibc;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<Verdict(std::uint64_t)> body;
};

CMatrix random_unitary_between(Rng& rng, const HermitianSplit& split) {
  return split.basis_minus * haar_unitary(rng, split.dim_minus()) * split.basis_plus.adjoint();
}

CVector solve_outer_components(const SimpleIbc& ibc, cplx psi2, cplx psi3, cplx psi0) {
  CMatrix unknown(4, 2);
  unknown << ibc.R.col(0), ibc.R.col(3);
  CVector rhs = ibc.M.col(0) * psi0 - ibc.R.col(1) * psi2 - ibc.R.col(2) * psi3;
  const CVector x = unknown.completeOrthogonalDecomposition().solve(rhs);
  CVector psi(4);
  psi << x(0), psi2, psi3, x(1);
  return psi;
}

Verdict identity_suite(std::uint64_t seed) {
  Rng rng(seed);
  const std::array<double, 3> e3{0.0, 0.0, 1.0};
  const ReflectingBC bag = mit_bag(weyl_rep(), e3);
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double hbar = uniform(rng, 0.5, 2.0);
    const double x1 = uniform(rng, -1.5, 1.5);
    const double x2 = uniform(rng, -1.5, 1.5);
    CVector N = CVector::Zero(4);
    N(0) = N(2) = std::exp(-x1 * x1 - x2 * x2);
    const CVector draw = random_gaussian_vector(rng, 3);
    const SimpleIbc ibc = simple_ibc_constraint(bag.split, bag.L, N, hbar);
    const CVector psi = solve_outer_components(ibc, draw(0), draw(1), draw(2));
    const CVector star = CVector::Constant(1, draw(2));
    const double r = local_conservation_residual(psi, star, N, bag.split.A, hbar);
    const double o = oracle::two_sector_balance(draw(0), draw(1), draw(2), N, hbar).residual();
    worst = std::max(worst, std::abs(r));
    worst_oracle = std::max(worst_oracle, std::abs(o));
  }
  double worst_single = 0.0;
  for (int k = 0; k < 1000; ++k) {
    CVector N = CVector::Zero(4);
    N(0) = 1.0;
    const CVector draw = random_gaussian_vector(rng, 3);
    const SimpleIbc ibc = simple_ibc_constraint(bag.split, bag.L, N, 1.0);
    const CVector psi = solve_outer_components(ibc, draw(0), draw(1), draw(2));
    const double r = local_conservation_residual(psi, CVector::Constant(1, draw(2)), N, bag.split.A, 1.0);
    const double o = oracle::two_sector_balance(draw(0), draw(1), draw(2), N, 1.0).residual();
    const double expected = std::norm(draw(2));
    worst_single = std::max({worst_single, std::abs(r - expected), std::abs(o - expected)});
  }
  const bool ok = worst <= 1e-12 && worst_oracle <= 1e-12 && worst_single <= 1e-12;
  return {ok, fmt("max|residual| %.2e (oracle %.2e), N=e1 deviation %.2e", worst, worst_oracle, worst_single)};
}

Verdict bijection(std::uint64_t seed) {
  Rng rng(seed);
  double worst_roundtrip = 0.0;
  int not_lagrangian = 0;
  int oracle_disagree = 0;
  int trivial_accepted = 0;
  for (int k = 0; k < 500; ++k) {
    const int dim = 2 + static_cast<int>(rng() % 7);
    const int d0 = static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
    const int dp = (dim - d0) / 2;
    const int zero_dim = dim - 2 * dp;
    if (dp == 0) continue;
    const HermitianSplit split = hermitian_split(random_hermitian_with_signature(rng, dp, dp, zero_dim));
    const CMatrix L = random_unitary_between(rng, split);
    const Subspace s = subspace_from_unitary(L, split);
    if (!is_complete_lagrangian(s, split.A, 1e-9)) ++not_lagrangian;
    if (!oracle::complete_lagrangian(s.basis(), split.A)) ++oracle_disagree;
    worst_roundtrip = std::max(worst_roundtrip, max_abs(unitary_from_subspace(s, split) - L));
    const Subspace zero = Subspace::zero(dim);
    const Subspace plus = Subspace::span(split.basis_plus);
    if (is_complete_lagrangian(zero, split.A, 1e-9) || is_complete_lagrangian(plus, split.A, 1e-9))
      ++trivial_accepted;
    if (oracle::complete_lagrangian(zero.basis(), split.A) || oracle::complete_lagrangian(plus.basis(), split.A))
      ++trivial_accepted;
  }
  const bool ok = worst_roundtrip <= 1e-9 && not_lagrangian == 0 && oracle_disagree == 0 && trivial_accepted == 0;
  return {ok, fmt("roundtrip %.2e, rejected %d, oracle rejected %d, {0}/E+ accepted %d", worst_roundtrip,
                  not_lagrangian, oracle_disagree, trivial_accepted)};
}

/// N with P0 N = 0 and N^dag A^inv N = 0 for a balanced split.
CMatrix vanishing_hat_coupling(Rng& rng, const HermitianSplit& split, int cols) {
  const int d = split.dim_plus();
  const CMatrix x = random_gaussian(rng, d, cols);
  const CMatrix u = haar_unitary(rng, d);
  const CMatrix root_plus = split.Aplus.diagonal().cwiseSqrt().asDiagonal();
  const CMatrix root_minus = (-split.Aminus.diagonal()).cwiseSqrt().asDiagonal();
  return split.basis_plus * root_plus * x + split.basis_minus * root_minus * u * x;
}

Verdict tilde_forms(std::uint64_t seed) {
  Rng rng(seed);
  double off_block = 0.0;
  double member = 0.0;
  double simple_distance = 0.0;
  int generic = 0;
  int attempts = 0;
  int hat_zero = 0;
  while (generic < 500 && attempts < 20000) {
    ++attempts;
    const int dp = 1 + static_cast<int>(rng() % 3);
    const int dm = 1 + static_cast<int>(rng() % 3);
    const int d0 = static_cast<int>(rng() % 3);
    const int rf = 1 + static_cast<int>(rng() % 2);
    const double hbar = uniform(rng, 0.5, 2.0);
    const HermitianSplit split = hermitian_split(random_hermitian_with_signature(rng, dp, dm, d0));
    const CMatrix N = random_gaussian(rng, split.dim(), rf);
    const TildeForm tf = tilde_form(split, N, hbar);
    const CMatrix prime = tf.Ftilde.adjoint() * tf.Atilde * tf.Ftilde;
    CMatrix off = prime;
    off.block(0, 0, dp, dp).setZero();
    off.block(dp, dp, dm, dm).setZero();
    off.bottomRightCorner(prime.rows() - dp - dm, prime.cols() - dp - dm).setZero();
    off_block = std::max({off_block, off.norm(), a_prime_off_block_norm(tf, split)});

    const HermitianSplit natural = hermitian_split(a_prime_natural(split, N, hbar));
    if (!natural.balanced()) continue;
    ++generic;
    IbcSpec spec{split, N, hbar, random_unitary_between(rng, natural)};
    const Subspace s = tilde_subspace(spec);
    const CMatrix at = a_tilde_natural(split, N, hbar);
    for (int t = 0; t < 4; ++t) {
      const CVector c = random_gaussian_vector(rng, s.dim()).normalized();
      const CVector psi = s.basis() * c;
      member = std::max(member, std::abs(psi.dot(at * psi)));
    }
  }
  for (int k = 0; k < 200; ++k) {
    const int dp = 1 + static_cast<int>(rng() % 3);
    const int d0 = static_cast<int>(rng() % 2);
    const int rf = 1 + static_cast<int>(rng() % 2);
    const double hbar = uniform(rng, 0.5, 2.0);
    const HermitianSplit split = hermitian_split(random_hermitian_with_signature(rng, dp, dp, d0));
    const CMatrix N = vanishing_hat_coupling(rng, split, rf);
    if (!check_simple_conditions(split, N).passed()) continue;
    ++hat_zero;
    const CMatrix L = random_unitary_between(rng, split);
    const IbcSpec spec{split, N, hbar, L};
    const Subspace tilde = tilde_subspace(spec);
    const SimpleIbc ibc = simple_ibc_constraint(split, L, N, hbar);
    CMatrix stacked(ibc.R.rows(), ibc.R.cols() + ibc.M.cols());
    stacked << ibc.R, -ibc.M;
    const CMatrix reference = oracle::null_space(stacked);
    simple_distance = std::max({simple_distance, oracle::projector_distance(tilde.basis(), reference),
                                projector_distance(tilde, simple_ibc_subspace(ibc))});
  }
  const bool ok = generic == 500 && hat_zero >= 100 && off_block <= 1e-11 && member <= 1e-10 && simple_distance <= 1e-9;
  return {ok, fmt("%d balanced cases, off-block %.2e, member flux %.2e, %d hat-zero cases distance %.2e", generic,
                  off_block, member, hat_zero, simple_distance)};
}

Verdict ahw_catalog(std::uint64_t seed) {
  Rng rng(seed);
  double roundtrip = 0.0;
  double oracle_distance = 0.0;
  for (int k = 0; k < 200; ++k) {
    AhwT t{uniform(rng, -3, 3), cplx(uniform(rng, -3, 3), uniform(rng, -3, 3)), uniform(rng, -3, 3)};
    const ReflectingBC bc = ahw_from_t(t);
    const AhwInverse inv = ahw_to_t(bc);
    if (!inv.t) return {false, "T-family member reported as no-T"};
    roundtrip = std::max(roundtrip, max_abs(inv.t->matrix() - t.matrix()));
    oracle_distance = std::max(oracle_distance,
                               oracle::projector_distance(bc.subspace().basis(), oracle::t_condition_subspace(t.matrix())));
  }
  const HermitianSplit split = weyl_alpha3_split();
  double worst_n = 0.0;
  double unitarity = 0.0;
  bool lagrangian = true;
  for (int k = 0; k < 20; ++k) {
    const cplx e = std::polar(1.0, uniform(rng, -std::numbers::pi, std::numbers::pi));
    CMatrix m1(2, 2), m2(2, 2), m3(2, 2);
    m1 << 0, e, -1, 0;
    m2 << 0, -1, e, 0;
    m3 << e, 0, 0, std::conj(e);
    for (const CMatrix& compact : {m1, m2, m3}) {
      const CMatrix L = ambient_from_compact_l(compact);
      unitarity = std::max(unitarity, unitarity_defect(L, split));
      const ReflectingBC bc = make_reflecting_bc(split, L);
      lagrangian = lagrangian && is_complete_lagrangian(bc.subspace(), split.A) &&
                   oracle::complete_lagrangian(bc.subspace().basis(), split.A);
      const AhwInverse inv = ahw_to_t(bc);
      if (inv.t) return {false, "exceptional unitary reported inside the T-family"};
      worst_n = std::max({worst_n, std::abs(inv.n_prime), std::abs(oracle::l_denominator(compact))});
    }
  }
  double min_n = 1e300;
  for (int k = 0; k < 10000; ++k) {
    const AhwT t{uniform(rng, -10, 10), cplx(uniform(rng, -10, 10), uniform(rng, -10, 10)), uniform(rng, -10, 10)};
    const cplx n = ahw_denominator(t);
    if (std::abs(n - oracle::t_denominator(t.a, t.b, t.c)) > 1e-12 * std::max(1.0, std::abs(n)))
      return {false, "denominator disagrees with its defining formula"};
    min_n = std::min(min_n, std::abs(n));
  }
  const bool ok = roundtrip <= 1e-9 && oracle_distance <= 1e-9 && unitarity <= 1e-12 && lagrangian && worst_n <= 1e-12 &&
                  min_n > 0.0;
  return {ok, fmt("T roundtrip %.2e, subspace vs T-condition %.2e, exceptional |N'| %.2e, min |N| %.3g", roundtrip,
                  oracle_distance, worst_n, min_n)};
}

Verdict plane_wave(std::uint64_t seed) {
  Rng rng(seed);
  const std::array<double, 3> e3{0.0, 0.0, 1.0};
  double outside = 0.0;
  double flux = 0.0;
  double mismatch = 0.0;
  for (int k = 0; k < 50; ++k) {
    PlaneWaveProblem p;
    p.k = {uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, 0.1, 2)};
    p.m = uniform(rng, 0.0, 2.0);
    p.hbar = 1.0;
    p.bc = mit_bag(p.rep, e3);
    const CMatrix in = oracle::positive_energy(p.k_incoming(), p.m, p.hbar);
    const CMatrix out = oracle::positive_energy(p.k, p.m, p.hbar);
    for (int c = 0; c < 2; ++c) {
      const CVector u = in.col(c);
      const Reflection r = reflect_plane_wave(p, u);
      outside = std::max(outside, (r.v - out * (out.adjoint() * r.v)).norm());
      const CVector total = u + r.v;
      flux = std::max({flux, std::abs(total.dot(oracle::weyl_alpha(3) * total)), std::abs(r.total_flux)});
      // The boundary condition fixes v uniquely: R out c = -R u must have full column rank.
      const CMatrix system = p.bc.R * out;
      Eigen::JacobiSVD<CMatrix> svd(system);
      const auto sv = svd.singularValues();
      if (sv(sv.size() - 1) < 1e-8 * sv(0)) return {false, "reflection system is singular"};
      const CVector coeff = system.completeOrthogonalDecomposition().solve(CVector(-p.bc.R * u));
      mismatch = std::max(mismatch, (out * coeff - r.v).norm());
    }
  }
  const bool ok = outside <= 1e-10 && flux <= 1e-11 && mismatch <= 1e-10;
  return {ok, fmt("distance from E+(k) %.2e, |flux| %.2e, v vs independent solve %.2e", outside, flux, mismatch)};
}

double raw_restricted_defect(const DiscreteHamiltonian& h) {
  const SparseC raw = SparseC(h.V.adjoint()) * h.H_raw * h.V;
  return sparse_hermiticity_defect(raw);
}

CMatrix admissible_ln_coupling(Rng& rng) {
  CMatrix N = CMatrix::Zero(4, 2);
  const CVector row = random_gaussian_vector(rng, 2);
  const cplx phase = std::polar(1.0, uniform(rng, -std::numbers::pi, std::numbers::pi));
  N.row(1) = row.transpose();
  N.row(2) = phase * row.transpose();
  return N;
}

Verdict hermiticity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  double worst_raw = 0.0;
  for (int nodes : {101, 201, 401}) {
    PointSourceParams ps;
    ps.nodes = nodes;
    ps.m = 0.7;
    ps.N = CVector::Zero(2);
    ps.N << cplx(0.6, 0.3), cplx(-0.3, 0.6);
    LienertNickelParams ln;
    ln.nodes = nodes;
    ln.m = 0.7;
    ln.theta = 0.4;
    ln.N = admissible_ln_coupling(rng);
    for (const ModelSpec& model : {builtin_point_source(ps), builtin_lienert_nickel(ln)}) {
      const DiscreteHamiltonian h = assemble(model);
      worst = std::max(worst, sparse_hermiticity_defect(h.H));
      worst_raw = std::max(worst_raw, raw_restricted_defect(h));
    }
  }
  const bool ok = worst <= 1e-13;
  return {ok, fmt("max|H - H^dag| %.2e (unsymmetrized operator on the constrained space %.2e)", worst, worst_raw)};
}

Verdict norm_conservation(std::uint64_t seed) {
  Rng rng(seed);
  double drift = 0.0;
  double sector_drift = 0.0;
  auto check = [&](ModelSpec model, bool uncoupled) {
    model.initial.points.clear();
    if (model.sectors[0].geometry == Geometry::kPoint) model.initial.points.push_back({0, {0.2, -0.1}});
    if (model.sectors[1].geometry == Geometry::kWedge) {
      Pulse p;
      p.sector = 1;
      p.center = {0.3, 0.6};
      p.width = 0.08;
      p.wavenumber = 3.0;
      p.spinor = CVector::Ones(4) * 0.5;
      model.initial.pulses.push_back(p);
    }
    const double dx = model.sectors[1].dx();
    const RunResult r = run(model, initial_state(model), 1000, 0.5 * dx, Method::kCrankNicolson);
    const auto& first = r.report.rows.front();
    for (const auto& row : r.report.rows) {
      drift = std::max(drift, std::abs(row.norm_total - first.norm_total) / first.norm_total);
      if (uncoupled)
        for (std::size_t s = 0; s < row.norms.size(); ++s)
          sector_drift = std::max(sector_drift, std::abs(row.norms[s] - first.norms[s]) / first.norm_total);
    }
  };
  PointSourceParams ps;
  ps.m = 0.5;
  ps.N = CVector::Zero(2);
  ps.N << 1.0, cplx(0.0, 1.0);
  check(builtin_point_source(ps), false);
  ps.N.setZero();
  check(builtin_point_source(ps), true);
  LienertNickelParams ln;
  ln.nodes = 101;
  ln.m = 0.0;
  ln.theta = 0.3;
  ln.N = admissible_ln_coupling(rng);
  check(builtin_lienert_nickel(ln), false);
  ln.N.setZero();
  check(builtin_lienert_nickel(ln), true);
  const bool ok = drift <= 1e-10 && sector_drift <= 1e-10;
  return {ok, fmt("relative total drift %.2e, per-sector drift with N = 0 %.2e", drift, sector_drift)};
}

ModelSpec convergence_model(int nodes, double m) {
  PointSourceParams ps;
  ps.nodes = nodes;
  ps.m = m;
  ps.N = CVector::Zero(2);
  ps.N << 1.0, 1.0;
  return builtin_point_source(ps);
}

Verdict balance_convergence(std::uint64_t) {
  std::vector<double> err;
  for (int nodes : {101, 201, 401}) {
    const ModelSpec model = convergence_model(nodes, 0.0);
    const double dx = model.sectors[1].dx();
    const int steps = static_cast<int>(std::lround(0.6 / (0.5 * dx)));
    const RunResult r = run(model, initial_state(model), steps, 0.5 * dx, Method::kCrankNicolson);
    const auto gain = discrete_gain(r.report, 0);
    const auto loss = face_loss(r.report, 0);
    double e = 0.0;
    for (std::size_t i = 0; i < gain.size(); ++i) e = std::max(e, std::abs(gain[i] - loss[i]));
    err.push_back(e);
  }
  const double r1 = err[0] / err[1];
  const double r2 = err[1] / err[2];
  return {r1 >= 1.8 && r2 >= 1.8, fmt("max|gain - loss| %.3e %.3e %.3e, ratios %.2f %.2f", err[0], err[1], err[2], r1, r2)};
}

Verdict characteristics_agreement(std::uint64_t) {
  std::vector<double> err;
  for (int nodes : {101, 201, 401}) {
    const ModelSpec model = convergence_model(nodes, 0.0);
    const double dx = model.sectors[1].dx();
    const double T = 0.6;
    const State psi0 = initial_state(model);
    const State exact = evolve_characteristics(model, psi0, T);
    const int steps = static_cast<int>(std::lround(T / (0.5 * dx)));
    const RunResult r = run(model, psi0, steps, 0.5 * dx, Method::kCrankNicolson);
    err.push_back(state_distance(model, r.final_state, exact));
  }
  const double r1 = err[0] / err[1];
  const double r2 = err[1] / err[2];
  return {r1 >= 1.8 && r2 >= 1.8, fmt("L2 distance %.3e %.3e %.3e, ratios %.2f %.2f", err[0], err[1], err[2], r1, r2)};
}

Verdict lienert_nickel_constraint(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  double worst_row = 0.0;
  for (int k = 0; k < 100; ++k) {
    LienertNickelParams p;
    p.nodes = 11;
    p.theta = uniform(rng, -std::numbers::pi, std::numbers::pi);
    p.hbar = uniform(rng, 0.5, 2.0);
    p.N = admissible_ln_coupling(rng);
    const ModelSpec model = builtin_lienert_nickel(p);
    const DiscreteHamiltonian h = assemble(model);
    const cplx e = std::polar(1.0, p.theta);
    const CMatrix expected = oracle::lienert_nickel_b(p.N, p.theta, p.hbar);
    for (const NodeConstraint& c : h.constraints) {
      if (c.face != Face::kDiagonal) continue;
      // The single nontrivial row, normalized to coefficient 1 on psi_{-+}.
      Eigen::Index row = 0;
      c.R.rowwise().norm().maxCoeff(&row);
      const cplx lead = c.R(row, 1);
      CMatrix r = c.R.row(row) / lead;
      CMatrix shape(1, 4);
      shape << 0, 1, -e, 0;
      worst_row = std::max(worst_row, max_abs(r - shape));
      const CMatrix rest = c.R - c.R.col(1) * (c.R.row(row) / lead);
      worst_row = std::max(worst_row, max_abs(rest));
      worst = std::max(worst, max_abs(CMatrix(c.M.row(row) / lead) - expected));
    }
    worst = std::max(worst, max_abs(lienert_nickel_b(p.N, p.theta, p.hbar) - expected));
  }
  return {worst <= 1e-12 && worst_row <= 1e-12, fmt("max|B - closed form| %.2e, row shape %.2e", worst, worst_row)};
}

}  // namespace

int main() {
  const std::uint64_t seed = seed_from_env();
  const std::vector<Criterion> criteria = {
      {1, "pointwise balance identity", 1.0, identity_suite},
      {2, "unitary/Lagrangian bijection", 5.0, bijection},
      {3, "extended form block structure", 10.0, tilde_forms},
      {4, "T-family catalog", 2.0, ahw_catalog},
      {5, "plane-wave reflection", 1.0, plane_wave},
      {6, "discrete Hermiticity", 10.0, hermiticity},
      {7, "norm conservation", 60.0, norm_conservation},
      {8, "balance convergence", 60.0, balance_convergence},
      {9, "CN vs characteristics", 60.0, characteristics_agreement},
      {10, "two-particle constraint", 1.0, lienert_nickel_constraint},
  };
  int failed = 0;
  std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body(seed);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit;
    const bool ok = v.passed && in_time;
    if (!ok) ++failed;
    std::printf("[%s] criterion %2d %-30s %s (%.2fs of %.0fs)\n", ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                secs, c.time_limit);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
