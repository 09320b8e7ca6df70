// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations written from the defining formulas, kept apart
// from the library's own code paths.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
inline const cplx I{0.0, 1.0};

inline Mat sigma(int k) {
  Mat s = Mat::Zero(2, 2);
  if (k == 1) s << 0, 1, 1, 0;
  if (k == 2) s << 0, -I, I, 0;
  if (k == 3) s << 1, 0, 0, -1;
  return s;
}

inline Mat blocks(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat m(a.rows() + c.rows(), a.cols() + b.cols());
  m << a, b, c, d;
  return m;
}

/// Chiral gamma^0 = [[0, I], [I, 0]], gamma^k = [[0, sigma^k], [-sigma^k, 0]].
inline Mat weyl_gamma(int mu) {
  const Mat z = Mat::Zero(2, 2);
  const Mat id = Mat::Identity(2, 2);
  if (mu == 0) return blocks(z, id, id, z);
  return blocks(z, sigma(mu), -sigma(mu), z);
}

/// gamma^0 = diag(I, -I), same spatial gammas.
inline Mat dirac_gamma(int mu) {
  const Mat z = Mat::Zero(2, 2);
  const Mat id = Mat::Identity(2, 2);
  if (mu == 0) return blocks(id, z, z, -id);
  return blocks(z, sigma(mu), -sigma(mu), z);
}

/// psi_weyl = U psi_dirac.
inline Mat dirac_to_weyl() {
  const Mat id = Mat::Identity(2, 2);
  return blocks(id, -id, id, id) / std::numbers::sqrt2;
}

inline Mat weyl_alpha(int k) { return weyl_gamma(0) * weyl_gamma(k); }
inline Mat weyl_beta() { return weyl_gamma(0); }

/// Orthonormal kernel basis from the eigenvectors of M^dag M.
inline Mat null_space(const Mat& m, double tol = 1e-9) {
  const Mat g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int k = 0;
  while (k < g.rows() && es.eigenvalues()(k) <= tol * scale) ++k;
  return es.eigenvectors().leftCols(k);
}

/// Orthonormal basis of the column span.
inline Mat column_span(const Mat& m, double tol = 1e-9) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(m * m.adjoint());
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  int k = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol * scale) ++k;
  return es.eigenvectors().rightCols(k);
}

inline double projector_distance(const Mat& a, const Mat& b) {
  return (a * a.adjoint() - b * b.adjoint()).norm();
}

/// S is complete Lagrangian for the form psi^dag A phi iff S equals its
/// A-orthogonal complement { phi : s^dag A phi = 0 for all s in S }.
inline bool complete_lagrangian(const Mat& basis, const Mat& A, double tol = 1e-9) {
  const Mat sharp = basis.cols() == 0 ? Mat(Mat::Identity(A.rows(), A.rows())) : null_space(basis.adjoint() * A);
  if (sharp.cols() != basis.cols()) return false;
  return projector_distance(basis, sharp) <= tol;
}

/// Boundary balance at one point of the two-sector model.
struct BoundaryBalance {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return lhs - rhs; }
};

/// psi1 and psi4 eliminated by the IBC; N and spinor indices 1..4 stored at 0..3.
inline BoundaryBalance two_sector_balance(cplx psi2, cplx psi3, cplx psi0, const Vec& N, double hbar) {
  const cplx psi1 = -I * psi3 + (I / hbar) * (N(0) - I * N(2)) * psi0;
  const cplx psi4 = -I * psi2 + (1.0 / hbar) * (N(1) + I * N(3)) * psi0;
  Vec psi(4);
  psi << psi1, psi2, psi3, psi4;
  const cplx ndag_psi = N.adjoint() * psi;
  BoundaryBalance out;
  out.lhs = 2.0 / hbar * (std::conj(psi0) * ndag_psi).imag();
  const Vec a3 = Vec((Vec(4) << -1.0, 1.0, 1.0, -1.0).finished());
  double j3 = 0.0;
  for (int k = 0; k < 4; ++k) j3 += a3(k).real() * std::norm(psi(k));
  out.rhs = -j3;
  return out;
}

/// Subspace of C^4 (Weyl components) for psi_D3,4 = i sigma3 T psi_D1,2.
inline Mat t_condition_subspace(const Mat& T) {
  Mat dirac(4, 2);
  dirac.topRows(2) = Mat::Identity(2, 2);
  dirac.bottomRows(2) = I * sigma(3) * T;
  return column_span(dirac_to_weyl() * dirac);
}

inline cplx t_denominator(double a, cplx b, double c) { return (1.0 + I * a) * (1.0 + I * c) + std::norm(b); }

/// 1 + sin z (e^{i tau} + e^{i kappa}) + e^{i(kappa + tau)} from the entries of the 2x2 L.
inline cplx l_denominator(const Mat& L) { return 1.0 + L(0, 1) + L(1, 0) - L.determinant(); }

/// Eigenvectors of H(k) = hbar k.alpha + m beta with positive energy.
inline Mat positive_energy(const std::array<double, 3>& k, double m, double hbar) {
  Mat h = m * weyl_beta();
  for (int a = 0; a < 3; ++a) h += hbar * k[static_cast<std::size_t>(a)] * weyl_alpha(a + 1);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvectors().rightCols(2);
}

/// (i / (sqrt2 hbar)) (N21 + e^{i theta} N31, N22 + e^{i theta} N32).
inline Mat lienert_nickel_b(const Mat& N, double theta, double hbar) {
  Mat b(1, 2);
  const cplx e = std::exp(I * theta);
  for (int k = 0; k < 2; ++k) b(0, k) = I / (std::numbers::sqrt2 * hbar) * (N(1, k) + e * N(2, k));
  return b;
}

}  // namespace oracle
