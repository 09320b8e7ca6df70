// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/lagrangian.hpp"

#include <algorithm>

namespace ibc {

Subspace Subspace::span(const CMatrix& spanning, double rel_tol) {
  return from_orthonormal(range_basis(spanning, rel_tol));
}

Subspace Subspace::kernel_of(const CMatrix& m, double rel_tol) {
  return from_orthonormal(kernel_basis(m, rel_tol));
}

Subspace Subspace::zero(int ambient_dim) { return from_orthonormal(CMatrix(ambient_dim, 0)); }

Subspace Subspace::whole(int ambient_dim) {
  return from_orthonormal(CMatrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(CMatrix basis) {
  Subspace s;
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::complement() const {
  if (dim() == 0) return whole(ambient_dim());
  return kernel_of(basis_.adjoint());
}

bool Subspace::contains(const CVector& v, double tol) const {
  if (v.size() != ambient_dim()) throw DimensionError("Subspace::contains: dimension mismatch");
  const CVector rest = v - basis_ * (basis_.adjoint() * v);
  return rest.norm() <= tol * std::max(1.0, v.norm());
}

double projector_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("projector_distance: ambient dimensions differ");
  return (a.projector() - b.projector()).norm();
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) { return projector_distance(a, b) <= tol; }

namespace {

void require_form(const Subspace& s, const CMatrix& A) {
  if (A.rows() != A.cols() || A.rows() != s.ambient_dim())
    throw DimensionError("form and subspace dimensions differ");
  if (hermiticity_defect(A) > 1e-10 * std::max(1.0, max_abs(A)))
    throw NotHermitianError("form matrix is not Hermitian");
}

double tol_scale(const HermitianSplit& split) { return std::max(1.0, max_abs(split.A)); }

}  // namespace

Subspace sharp(const Subspace& s, const CMatrix& A) {
  require_form(s, A);
  if (s.dim() == 0) return Subspace::whole(s.ambient_dim());
  return Subspace::kernel_of((A * s.basis()).adjoint());
}

bool is_complete_lagrangian(const Subspace& s, const CMatrix& A, double tol) {
  return projector_distance(s, sharp(s, A)) <= tol;
}

double unitarity_defect(const CMatrix& L, const HermitianSplit& split) {
  const int n = split.dim();
  if (L.rows() != n || L.cols() != n) throw DimensionError("L must be an ambient-dimension matrix");
  const double a = max_abs(L.adjoint() * L - split.Pplus);
  const double b = max_abs(L * L.adjoint() - split.Pminus);
  const double c = max_abs(L - split.Pminus * L * split.Pplus);
  return std::max({a, b, c});
}

CMatrix r_matrix(const CMatrix& L, const HermitianSplit& split) {
  if (L.rows() != split.dim() || L.cols() != split.dim()) throw DimensionError("r_matrix: L has wrong size");
  return split.sqrt_minus - L * split.sqrt_plus;
}

Subspace subspace_from_unitary(const CMatrix& L, const HermitianSplit& split, double tol) {
  if (!split.balanced())
    throw SignatureError("no complete Lagrangian subspace: dim E+ = " + std::to_string(split.dim_plus()) +
                         ", dim E- = " + std::to_string(split.dim_minus()));
  if (unitarity_defect(L, split) > tol) throw NotUnitaryError("L is not a unitary map E+ -> E-");
  Subspace s = Subspace::kernel_of(r_matrix(L, split));
  if (s.dim() != split.dim_zero() + split.dim_plus())
    throw SingularSystemError("kernel of R has unexpected dimension");
  return s;
}

CMatrix unitary_from_subspace(const Subspace& s, const HermitianSplit& split, double tol) {
  if (s.ambient_dim() != split.dim()) throw DimensionError("unitary_from_subspace: dimension mismatch");
  if (!split.balanced()) throw SignatureError("unitary_from_subspace: dim E+ != dim E-");
  const CMatrix ps = s.projector();
  const int n = split.dim();
  const CMatrix id = CMatrix::Identity(n, n);

  if (split.dim_zero() > 0 && max_abs((id - ps) * split.basis_zero) > tol)
    throw NotLagrangianError("subspace does not contain ker(A^n)");
  const CMatrix reduced = range_basis((id - split.P0) * s.basis());
  if (reduced.cols() != split.dim_plus())
    throw NotLagrangianError("subspace has dimension " + std::to_string(s.dim()) + ", expected " +
                             std::to_string(split.dim_zero() + split.dim_plus()));
  if (split.dim_plus() == 0) return CMatrix::Zero(n, n);

  const CMatrix m = split.basis_plus.adjoint() * reduced;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0)))
    throw NotLagrangianError("projection of the subspace onto E+ is singular");

  const CMatrix L =
      split.sqrt_minus * reduced * m.inverse() * split.basis_plus.adjoint() * split.inv_sqrt_plus;
  if (unitarity_defect(L, split) > tol * tol_scale(split) * 10.0)
    throw NotLagrangianError("subspace is not isotropic for the boundary form");
  return L;
}

CMatrix unitary_from_c(const CMatrix& C, const HermitianSplit& split) {
  if (C.rows() != split.dim() || C.cols() != split.dim()) throw DimensionError("unitary_from_c: C has wrong size");
  return split.sqrt_minus * C * split.inv_sqrt_plus;
}

CMatrix c_from_unitary(const CMatrix& L, const HermitianSplit& split) {
  if (L.rows() != split.dim() || L.cols() != split.dim()) throw DimensionError("c_from_unitary: L has wrong size");
  return split.inv_sqrt_minus * L * split.sqrt_plus;
}

double c_flux_defect(const CMatrix& C, const HermitianSplit& split) {
  if (C.rows() != split.dim() || C.cols() != split.dim()) throw DimensionError("c_flux_defect: C has wrong size");
  const CMatrix cm = split.Pminus * C * split.Pplus;
  return max_abs(split.Pplus * split.A * split.Pplus + cm.adjoint() * split.A * cm);
}

ReflectingBC make_reflecting_bc(HermitianSplit split, CMatrix L) {
  if (!split.balanced()) throw SignatureError("reflecting BC needs dim E+ = dim E-");
  if (unitarity_defect(L, split) > kSubspaceTol) throw NotUnitaryError("L is not a unitary map E+ -> E-");
  ReflectingBC bc;
  bc.R = r_matrix(L, split);
  bc.L = std::move(L);
  bc.split = std::move(split);
  return bc;
}

ReflectingBC reflecting_bc_from_subspace(HermitianSplit split, const Subspace& s) {
  CMatrix L = unitary_from_subspace(s, split);
  return make_reflecting_bc(std::move(split), std::move(L));
}

json subspace_to_json(const Subspace& s) {
  return json{{"ambient_dim", s.ambient_dim()}, {"basis", matrix_to_json(s.basis())}};
}

Subspace subspace_from_json(const json& j) {
  if (!j.is_object() || !j.contains("basis")) throw SchemaError("subspace needs a 'basis' field");
  CMatrix b = matrix_from_json(j.at("basis"));
  if (j.contains("ambient_dim")) {
    const int n = j.at("ambient_dim").get<int>();
    if (b.rows() == 0) b = CMatrix(n, 0);
    if (b.rows() != n) throw SchemaError("subspace basis rows must equal ambient_dim");
  }
  return Subspace::span(b);
}

json reflecting_bc_to_json(const ReflectingBC& bc) {
  return json{{"An", matrix_to_json(bc.split.A)},
              {"L", matrix_to_json(bc.L)},
              {"R", matrix_to_json(bc.R)},
              {"split", split_to_json(bc.split)},
              {"subspace", subspace_to_json(bc.subspace())}};
}

ReflectingBC reflecting_bc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("An")) throw SchemaError("reflecting BC needs 'An'");
  HermitianSplit split = hermitian_split(matrix_from_json(j.at("An")));
  if (j.contains("L")) return make_reflecting_bc(std::move(split), matrix_from_json(j.at("L")));
  if (j.contains("subspace")) return reflecting_bc_from_subspace(std::move(split), subspace_from_json(j.at("subspace")));
  throw SchemaError("reflecting BC needs 'L' or 'subspace'");
}

}  // namespace ibc
