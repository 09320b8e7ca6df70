// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "ibc/bc_catalog.hpp"
#include "ibc/random.hpp"
#include "oracles.hpp"

using namespace ibc;

namespace {

const std::array<double, 3> kE3{0.0, 0.0, 1.0};

}  // namespace

TEST_CASE("MIT bag subspace is the +i eigenspace of gamma^3") {
  const ReflectingBC bag = mit_bag(weyl_rep(), kE3);
  const CMatrix reference = oracle::null_space(oracle::weyl_gamma(3) - oracle::I * CMatrix::Identity(4, 4));
  REQUIRE(reference.cols() == 2);
  CHECK(oracle::projector_distance(bag.subspace().basis(), reference) < 1e-12);
  CHECK(oracle::complete_lagrangian(bag.subspace().basis(), oracle::weyl_alpha(3)));
  CHECK(unitarity_defect(bag.L, bag.split) < 1e-12);
}

TEST_CASE("MIT bag L on the Weyl alpha^3 split") {
  const ReflectingBC bag = mit_bag(weyl_rep(), kE3);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 2) = -oracle::I;
  expected(3, 1) = -oracle::I;
  CHECK(max_abs(bag.L - expected) < 1e-12);
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 0) = 1.0;
  r(0, 2) = oracle::I;
  r(3, 1) = oracle::I;
  r(3, 3) = 1.0;
  CHECK(max_abs(bag.R - r) < 1e-12);
}

TEST_CASE("MIT bag works for the Dirac representation and oblique normals") {
  const std::array<double, 3> n{0.6, 0.0, 0.8};
  const ReflectingBC bag = mit_bag(dirac_rep(), n);
  CHECK(is_complete_lagrangian(bag.subspace(), bag.split.A));
  CHECK_THROWS_AS(mit_bag(weyl_rep(), std::array<double, 2>{1.0, 0.0}), DimensionError);
}

TEST_CASE("interval conditions relate the two components") {
  const auto [left, right] = interval_conditions(0.3, -1.1);
  CVector psi(2);
  psi << 1.0, std::polar(1.0, 0.3);
  CHECK(left.subspace().contains(psi));
  psi << 1.0, std::polar(1.0, -1.1);
  CHECK(right.subspace().contains(psi));
  CHECK(is_complete_lagrangian(left.subspace(), left.split.A));
  CHECK(is_complete_lagrangian(right.subspace(), right.split.A));
}

TEST_CASE("T = 0 gives the swap matrix") {
  const CMatrix compact = ahw_compact_l(AhwT{});
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(max_abs(compact - swap) < 1e-14);
}

TEST_CASE("T-family subspaces satisfy the Dirac-representation condition") {
  Rng rng(21);
  for (int k = 0; k < 40; ++k) {
    const AhwT t{uniform(rng, -4, 4), cplx(uniform(rng, -4, 4), uniform(rng, -4, 4)), uniform(rng, -4, 4)};
    const ReflectingBC bc = ahw_from_t(t);
    CHECK(oracle::projector_distance(bc.subspace().basis(), oracle::t_condition_subspace(t.matrix())) < 1e-10);
    CHECK(std::abs(ahw_denominator(t) - oracle::t_denominator(t.a, t.b, t.c)) < 1e-12);
    const AhwInverse inv = ahw_to_t(bc);
    REQUIRE(inv.t.has_value());
    CHECK(max_abs(inv.t->matrix() - t.matrix()) < 1e-9);
    CHECK(std::abs(inv.n_prime - oracle::l_denominator(compact_from_ambient_l(bc.L))) < 1e-12);
  }
}

TEST_CASE("exceptional unitaries lie outside the T-family") {
  const cplx e = std::polar(1.0, 0.9);
  CMatrix m(2, 2);
  m << 0, e, -1, 0;
  const ReflectingBC bc = make_reflecting_bc(weyl_alpha3_split(), ambient_from_compact_l(m));
  const AhwInverse inv = ahw_to_t(bc);
  CHECK_FALSE(inv.t.has_value());
  CHECK(std::abs(inv.n_prime) < 1e-12);
}

TEST_CASE("unitary angle decomposition roundtrips") {
  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const UnitaryAngles a{uniform(rng, 0.1, 1.4), uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
    const CMatrix l = compose_unitary2(a);
    CHECK(max_abs(l.adjoint() * l - CMatrix::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(compose_unitary2(decompose_unitary2(l)) - l) < 1e-12);
  }
}

TEST_CASE("compact and ambient L conversions are inverse") {
  Rng rng(9);
  const CMatrix u = haar_unitary(rng, 2);
  const CMatrix ambient = ambient_from_compact_l(u);
  CHECK(unitarity_defect(ambient, weyl_alpha3_split()) < 1e-13);
  CHECK(max_abs(compact_from_ambient_l(ambient) - u) < 1e-15);
}

TEST_CASE("Benguria condition and two-particle diagonal condition") {
  const ReflectingBC b = benguria(0.5);
  CVector psi(2);
  psi << 1.0, std::polar(1.0, 0.5);
  CHECK(b.subspace().contains(psi));
  const ReflectingBC d = lienert_two_particle(0.7);
  CHECK(max_abs(d.split.A - lienert_normal_matrix()) < 1e-15);
  CVector two = CVector::Zero(4);
  two(1) = std::polar(1.0, 0.7);
  two(2) = 1.0;
  CHECK(d.subspace().contains(two));
  CHECK(d.subspace().dim() == 3);
}

TEST_CASE("plane-wave reflection by the MIT bag") {
  PlaneWaveProblem p;
  p.k = {0.3, -0.4, 1.2};
  p.m = 0.8;
  p.bc = mit_bag(p.rep, kE3);
  const CMatrix in = positive_energy_basis(p.rep, p.k_incoming(), p.m, p.hbar);
  const CMatrix ref_in = oracle::positive_energy(p.k_incoming(), p.m, p.hbar);
  CHECK(oracle::projector_distance(in, ref_in) < 1e-12);
  const CMatrix out = oracle::positive_energy(p.k, p.m, p.hbar);
  for (int c = 0; c < 2; ++c) {
    const Reflection r = reflect_plane_wave(p, in.col(c));
    CHECK((r.v - out * (out.adjoint() * r.v)).norm() < 1e-12);
    CHECK(r.constraint_residual < 1e-12);
    CHECK(std::abs(r.total_flux) < 1e-12);
  }
  const CMatrix refl = reflection_matrix(p);
  CHECK(max_abs(refl.adjoint() * refl - CMatrix::Identity(2, 2)) < 1e-12);
  CHECK(std::abs(p.energy() - std::sqrt(0.09 + 0.16 + 1.44 + 0.64)) < 1e-14);
}

TEST_CASE("massless plane waves at normal incidence reflect with zero flux") {
  PlaneWaveProblem p;
  p.k = {0.0, 0.0, 1.0};
  p.m = 0.0;
  p.bc = mit_bag(p.rep, kE3);
  const CMatrix in = positive_energy_basis(p.rep, p.k_incoming(), 0.0, 1.0);
  for (int c = 0; c < 2; ++c) {
    const Reflection r = reflect_plane_wave(p, in.col(c));
    CHECK(std::abs(r.total_flux) < 1e-12);
    CHECK(std::abs(r.v.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("plane-wave preconditions") {
  CHECK_THROWS_AS(positive_energy_basis(weyl_rep(), {0.0, 0.0, 0.0}, 0.0, 1.0), PreconditionError);
  PlaneWaveProblem p;
  p.bc = mit_bag(p.rep, kE3);
  CVector wrong = CVector::Zero(4);
  wrong(1) = 1.0;
  CHECK_THROWS_AS(reflect_plane_wave(p, wrong), PreconditionError);
}

TEST_CASE("T JSON roundtrip") {
  const AhwT t{0.5, cplx(1.0, -2.0), -0.25};
  const AhwT back = ahw_t_from_json(ahw_t_to_json(t));
  CHECK(back.a == t.a);
  CHECK(back.b == t.b);
  CHECK(back.c == t.c);
  CHECK_THROWS_AS(ahw_t_from_json(json{{"a", 1.0}}), SchemaError);
}
