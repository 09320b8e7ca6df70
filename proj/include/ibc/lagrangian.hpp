// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ibc/matrix.hpp"
#include "ibc/spin_algebra.hpp"

namespace ibc {

inline constexpr double kSubspaceTol = 1e-9;

/// Linear subspace of C^n held as an orthonormal column basis.
class Subspace {
 public:
  Subspace() = default;
  /// Orthonormalizes the columns of `spanning`; rank decided by SVD.
  static Subspace span(const CMatrix& spanning, double rel_tol = 1e-10);
  static Subspace kernel_of(const CMatrix& m, double rel_tol = 1e-10);
  static Subspace zero(int ambient_dim);
  static Subspace whole(int ambient_dim);
  /// Trusts the caller that `basis` already has orthonormal columns.
  static Subspace from_orthonormal(CMatrix basis);

  const CMatrix& basis() const { return basis_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  CMatrix projector() const { return basis_ * basis_.adjoint(); }
  /// Orthonormal basis of the orthogonal complement.
  Subspace complement() const;
  bool contains(const CVector& v, double tol = kSubspaceTol) const;
  Subspace mapped(const CMatrix& m) const { return span(m * basis_); }

 private:
  CMatrix basis_;
};

/// Frobenius distance between the orthogonal projectors.
double projector_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol = kSubspaceTol);

/// S^# = { phi : (phi | A chi) = 0 for all chi in S }.
Subspace sharp(const Subspace& s, const CMatrix& A);
bool is_complete_lagrangian(const Subspace& s, const CMatrix& A, double tol = kSubspaceTol);

/// max of |L^dag L - P+|, |L L^dag - P-| and the part of L outside P- L P+.
double unitarity_defect(const CMatrix& L, const HermitianSplit& split);

/// S = E0 + { psi : (-A-)^{1/2} P- psi = L (A+)^{1/2} P+ psi }.
Subspace subspace_from_unitary(const CMatrix& L, const HermitianSplit& split, double tol = kSubspaceTol);

/// Inverse of subspace_from_unitary. Throws NotLagrangianError when S is
/// not complete Lagrangian for split.A.
CMatrix unitary_from_subspace(const Subspace& s, const HermitianSplit& split, double tol = kSubspaceTol);

/// R = (-A-)^{1/2} P- - L (A+)^{1/2} P+; the boundary condition is R psi = 0.
CMatrix r_matrix(const CMatrix& L, const HermitianSplit& split);

/// L = (-A-)^{1/2} C (A+)^{-1/2} for P- psi = C P+ psi.
CMatrix unitary_from_c(const CMatrix& C, const HermitianSplit& split);
CMatrix c_from_unitary(const CMatrix& L, const HermitianSplit& split);
/// max |A+ + C^dag A- C| over E+; zero iff P- psi = C P+ psi has no normal flux.
double c_flux_defect(const CMatrix& C, const HermitianSplit& split);

/// Reflecting boundary data at one boundary point. L is stored as an
/// ambient matrix with L = P- L P+.
struct ReflectingBC {
  HermitianSplit split;
  CMatrix L;
  CMatrix R;

  Subspace subspace() const { return subspace_from_unitary(L, split); }
};

/// Validates unitarity of L (tolerance 1e-9) and derives R.
ReflectingBC make_reflecting_bc(HermitianSplit split, CMatrix L);
ReflectingBC reflecting_bc_from_subspace(HermitianSplit split, const Subspace& s);

json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const json& j);
json reflecting_bc_to_json(const ReflectingBC& bc);
/// Accepts {"An", "L"} or {"An", "subspace"}.
ReflectingBC reflecting_bc_from_json(const json& j);

}  // namespace ibc
