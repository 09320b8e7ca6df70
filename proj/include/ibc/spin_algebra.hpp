// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "ibc/matrix.hpp"

namespace ibc {

inline constexpr double kDefaultZeroTol = 1e-10;

/// Gamma, alpha and beta matrices of one spinor representation.
/// alphas[k] = gamma0 * gammas[k]; beta = gamma0.
struct SpinRep {
  std::string name;
  int dim = 0;
  CMatrix gamma0;
  std::vector<CMatrix> gammas;
  std::vector<CMatrix> alphas;
  CMatrix beta;

  int space_dim() const { return static_cast<int>(alphas.size()); }
};

/// Chiral representation; alpha^3 = diag(-1, 1, 1, -1).
SpinRep weyl_rep();
/// Standard representation with block-antidiagonal alphas.
SpinRep dirac_rep();
/// 1+1 dimensional representation: beta = sigma_1, alpha^1 = sigma_3.
SpinRep one_d_rep();

/// Coefficient matrices of n_particles non-interacting particles: alpha^k of
/// particle p placed on tensor slot p, identities elsewhere. Ordered
/// particle-major, i.e. A^{d*p + k}.
std::vector<CMatrix> tensor_alphas(const SpinRep& rep, int n_particles);

/// A^n = sum_a n^a A^a for a unit vector n (flat metric).
CMatrix normal_matrix(std::span<const CMatrix> alphas, std::span<const double> n);

/// Spectral data of a Hermitian boundary matrix A^n.
///
/// Eigenvalues are ascending. Eigenvalues with |lambda| <= zero_tol belong
/// to the kernel E0. All derived operators are stored as ambient-dimension
/// matrices that vanish off their natural subspace, e.g. sqrt_plus is
/// (A+)^{1/2} P+ and inv_sqrt_minus is (-A-)^{-1/2} P-.
struct HermitianSplit {
  CMatrix A;
  RVector eigenvalues;
  CMatrix eigenvectors;
  double zero_tol = kDefaultZeroTol;

  CMatrix P0, Pplus, Pminus;
  /// Orthonormal bases (columns) of E+, E-, E0 in ascending eigenvalue order.
  CMatrix basis_plus, basis_minus, basis_zero;
  /// Restrictions A+ and A- in the coordinates of basis_plus / basis_minus.
  CMatrix Aplus, Aminus;
  /// Inverse of A on the orthogonal complement of its kernel.
  CMatrix Ainv;
  CMatrix sqrt_plus, sqrt_minus, inv_sqrt_plus, inv_sqrt_minus;
  /// |A|^{1/2}
  CMatrix sqrt_abs;

  int dim() const { return static_cast<int>(A.rows()); }
  int dim_plus() const { return static_cast<int>(basis_plus.cols()); }
  int dim_minus() const { return static_cast<int>(basis_minus.cols()); }
  int dim_zero() const { return static_cast<int>(basis_zero.cols()); }
  bool balanced() const { return dim_plus() == dim_minus(); }
};

/// Throws NotHermitianError when A deviates from A^dagger by more than
/// 1e-10 * max(1, max|A|).
HermitianSplit hermitian_split(const CMatrix& A, double zero_tol = kDefaultZeroTol);

json split_to_json(const HermitianSplit& split);

}  // namespace ibc
