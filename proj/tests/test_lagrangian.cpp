// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "ibc/lagrangian.hpp"
#include "ibc/random.hpp"
#include "oracles.hpp"

using namespace ibc;

namespace {

CMatrix diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("subspace span, complement and projector") {
  CMatrix s(3, 2);
  s << 1, 1, 0, 1, 0, 0;
  const Subspace sub = Subspace::span(s);
  CHECK(sub.dim() == 2);
  CHECK(max_abs(sub.basis().adjoint() * sub.basis() - CMatrix::Identity(2, 2)) < 1e-14);
  const Subspace comp = sub.complement();
  CHECK(comp.dim() == 1);
  CHECK(max_abs(sub.projector() + comp.projector() - CMatrix::Identity(3, 3)) < 1e-14);
  CVector e1 = CVector::Zero(3);
  e1(0) = 1.0;
  CHECK(sub.contains(e1));
  CHECK_FALSE(comp.contains(e1));
  CHECK(Subspace::zero(3).dim() == 0);
  CHECK(Subspace::whole(3).dim() == 3);
}

TEST_CASE("sharp of a subspace agrees with the direct kernel") {
  Rng rng(3);
  const CMatrix a = random_hermitian_with_signature(rng, 2, 2, 1);
  const Subspace s = Subspace::span(random_gaussian(rng, 5, 2));
  const Subspace sh = sharp(s, a);
  const CMatrix reference = oracle::null_space(s.basis().adjoint() * a);
  CHECK(oracle::projector_distance(sh.basis(), reference) < 1e-10);
}

TEST_CASE("the three standard subspaces of sigma3") {
  const CMatrix a = diag({1.0, -1.0});
  const HermitianSplit split = hermitian_split(a);
  CMatrix v(2, 1);
  v << 1.0, std::polar(1.0, 0.3);
  CHECK(is_complete_lagrangian(Subspace::span(v), a));
  CHECK_FALSE(is_complete_lagrangian(Subspace::zero(2), a));
  CHECK_FALSE(is_complete_lagrangian(Subspace::span(split.basis_plus), a));
  CHECK_FALSE(is_complete_lagrangian(Subspace::whole(2), a));
}

TEST_CASE("unitary and subspace are inverse to each other") {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const HermitianSplit split = hermitian_split(random_hermitian_with_signature(rng, 2, 2, k % 3));
    const CMatrix L = split.basis_minus * haar_unitary(rng, 2) * split.basis_plus.adjoint();
    CHECK(unitarity_defect(L, split) < 1e-12);
    const Subspace s = subspace_from_unitary(L, split);
    CHECK(s.dim() == 2 + k % 3);
    CHECK(oracle::complete_lagrangian(s.basis(), split.A));
    CHECK(max_abs(unitary_from_subspace(s, split) - L) < 1e-10);
    const CMatrix R = r_matrix(L, split);
    CHECK(max_abs(R * s.basis()) < 1e-12);
  }
}

TEST_CASE("non-Lagrangian subspaces are reported as such") {
  const HermitianSplit split = hermitian_split(diag({1.0, -1.0}));
  CHECK_THROWS_AS(unitary_from_subspace(Subspace::zero(2), split), NotLagrangianError);
  CHECK_THROWS_AS(unitary_from_subspace(Subspace::span(split.basis_plus), split), NotLagrangianError);
}

TEST_CASE("non-unitary L is rejected") {
  const HermitianSplit split = hermitian_split(diag({1.0, -1.0}));
  CMatrix L = CMatrix::Zero(2, 2);
  L(1, 0) = 2.0;
  CHECK(unitarity_defect(L, split) > 0.5);
  CHECK_THROWS_AS(make_reflecting_bc(split, L), NotUnitaryError);
}

TEST_CASE("C equals L when A+ and -A- are identities") {
  Rng rng(5);
  const HermitianSplit split = hermitian_split(diag({1.0, -1.0, 1.0, -1.0}));
  const CMatrix L = split.basis_minus * haar_unitary(rng, 2) * split.basis_plus.adjoint();
  CHECK(max_abs(c_from_unitary(L, split) - L) < 1e-14);
  CHECK(max_abs(unitary_from_c(L, split) - L) < 1e-14);
  CHECK(c_flux_defect(L, split) < 1e-14);
}

TEST_CASE("C flux identity for a scaled split") {
  const HermitianSplit split = hermitian_split(diag({2.0, -0.5}));
  // 2 - 0.5 |c|^2 = 0
  CMatrix C = CMatrix::Zero(2, 2);
  C(1, 0) = std::polar(2.0, 0.7);
  CHECK(c_flux_defect(C, split) < 1e-14);
  const CMatrix L = unitary_from_c(C, split);
  CHECK(unitarity_defect(L, split) < 1e-14);
  CHECK(max_abs(c_from_unitary(L, split) - C) < 1e-14);
}

TEST_CASE("reflecting BC JSON roundtrip") {
  const HermitianSplit split = hermitian_split(diag({1.0, -1.0}));
  CMatrix L = CMatrix::Zero(2, 2);
  L(1, 0) = std::polar(1.0, 0.4);
  const ReflectingBC bc = make_reflecting_bc(split, L);
  const ReflectingBC back = reflecting_bc_from_json(reflecting_bc_to_json(bc));
  CHECK(max_abs(back.L - L) < 1e-15);
  json by_subspace{{"An", matrix_to_json(split.A)}, {"subspace", subspace_to_json(bc.subspace())}};
  CHECK(max_abs(reflecting_bc_from_json(by_subspace).L - L) < 1e-12);
  CHECK_THROWS_AS(reflecting_bc_from_json(json{{"An", matrix_to_json(split.A)}}), SchemaError);
}

TEST_CASE("matrices serialize as nested re/im pairs") {
  CMatrix m(1, 2);
  m << cplx(1.5, -2.0), cplx(0.0, 0.25);
  const json j = matrix_to_json(m);
  CHECK(j.dump() == "[[[1.5,-2.0],[0.0,0.25]]]");
  CHECK(max_abs(matrix_from_json(j) - m) == 0.0);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]")), SchemaError);
}
