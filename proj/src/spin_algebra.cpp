// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/spin_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace ibc {

namespace {

CMatrix block2(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  CMatrix m(4, 4);
  m << a, b, c, d;
  return m;
}

void fill_alphas(SpinRep& rep) {
  rep.alphas.clear();
  for (const auto& g : rep.gammas) rep.alphas.push_back(rep.gamma0 * g);
  rep.beta = rep.gamma0;
}

}  // namespace

SpinRep weyl_rep() {
  const CMatrix z = CMatrix::Zero(2, 2);
  const CMatrix id = CMatrix::Identity(2, 2);
  SpinRep rep;
  rep.name = "weyl";
  rep.dim = 4;
  rep.gamma0 = block2(z, id, id, z);
  for (int k = 1; k <= 3; ++k) rep.gammas.push_back(block2(z, pauli(k), -pauli(k), z));
  fill_alphas(rep);
  return rep;
}

SpinRep dirac_rep() {
  const CMatrix z = CMatrix::Zero(2, 2);
  const CMatrix id = CMatrix::Identity(2, 2);
  SpinRep rep;
  rep.name = "dirac";
  rep.dim = 4;
  rep.gamma0 = block2(id, z, z, -id);
  for (int k = 1; k <= 3; ++k) rep.gammas.push_back(block2(z, pauli(k), -pauli(k), z));
  fill_alphas(rep);
  return rep;
}

SpinRep one_d_rep() {
  SpinRep rep;
  rep.name = "one_d";
  rep.dim = 2;
  rep.gamma0 = pauli(1);
  rep.gammas.push_back(pauli(1) * pauli(3));
  fill_alphas(rep);
  return rep;
}

std::vector<CMatrix> tensor_alphas(const SpinRep& rep, int n_particles) {
  if (n_particles < 1) throw PreconditionError("tensor_alphas: n_particles must be >= 1");
  const CMatrix id = CMatrix::Identity(rep.dim, rep.dim);
  std::vector<CMatrix> out;
  for (int p = 0; p < n_particles; ++p) {
    for (const auto& alpha : rep.alphas) {
      CMatrix m = CMatrix::Identity(1, 1);
      for (int slot = 0; slot < n_particles; ++slot) m = kron(m, slot == p ? alpha : id);
      out.push_back(std::move(m));
    }
  }
  return out;
}

CMatrix normal_matrix(std::span<const CMatrix> alphas, std::span<const double> n) {
  if (alphas.size() != n.size() || alphas.empty())
    throw DimensionError("normal_matrix: need one coefficient matrix per normal component");
  double norm2 = 0.0;
  for (double c : n) norm2 += c * c;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw PreconditionError("normal_matrix: n is not a unit vector");
  CMatrix out = CMatrix::Zero(alphas[0].rows(), alphas[0].cols());
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (alphas[a].rows() != out.rows() || alphas[a].cols() != out.cols())
      throw DimensionError("normal_matrix: coefficient matrices differ in size");
    out += n[a] * alphas[a];
  }
  return out;
}

HermitianSplit hermitian_split(const CMatrix& A, double zero_tol) {
  if (A.rows() != A.cols()) throw DimensionError("hermitian_split: matrix is not square");
  if (!all_finite(A)) throw PreconditionError("hermitian_split: non-finite entries");
  if (hermiticity_defect(A) > 1e-10 * std::max(1.0, max_abs(A)))
    throw NotHermitianError("hermitian_split: matrix is not Hermitian");

  HermitianSplit s;
  s.A = hermitian_part(A);
  s.zero_tol = zero_tol;
  const Eigen::Index n = A.rows();

  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s.A);
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
  } else {
    s.eigenvalues = RVector(0);
    s.eigenvectors = CMatrix(0, 0);
  }

  std::vector<Eigen::Index> plus, minus, zero;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = s.eigenvalues(i);
    if (lam > zero_tol)
      plus.push_back(i);
    else if (lam < -zero_tol)
      minus.push_back(i);
    else
      zero.push_back(i);
  }

  auto columns = [&](const std::vector<Eigen::Index>& idx) {
    CMatrix b(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(idx[c]);
    return b;
  };
  auto diag_of = [&](const std::vector<Eigen::Index>& idx, auto fn) {
    RVector d(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) d(static_cast<Eigen::Index>(c)) = fn(s.eigenvalues(idx[c]));
    return d;
  };
  auto ambient = [](const CMatrix& basis, const RVector& d) -> CMatrix {
    return basis * d.cast<cplx>().asDiagonal() * basis.adjoint();
  };

  s.basis_plus = columns(plus);
  s.basis_minus = columns(minus);
  s.basis_zero = columns(zero);
  s.Pplus = s.basis_plus * s.basis_plus.adjoint();
  s.Pminus = s.basis_minus * s.basis_minus.adjoint();
  s.P0 = s.basis_zero * s.basis_zero.adjoint();

  const auto id = [](double x) { return x; };
  s.Aplus = diag_of(plus, id).cast<cplx>().asDiagonal();
  s.Aminus = diag_of(minus, id).cast<cplx>().asDiagonal();

  const auto inv = [](double x) { return 1.0 / x; };
  s.Ainv = ambient(s.basis_plus, diag_of(plus, inv)) + ambient(s.basis_minus, diag_of(minus, inv));

  const auto sq = [](double x) { return std::sqrt(std::abs(x)); };
  const auto isq = [](double x) { return 1.0 / std::sqrt(std::abs(x)); };
  s.sqrt_plus = ambient(s.basis_plus, diag_of(plus, sq));
  s.sqrt_minus = ambient(s.basis_minus, diag_of(minus, sq));
  s.inv_sqrt_plus = ambient(s.basis_plus, diag_of(plus, isq));
  s.inv_sqrt_minus = ambient(s.basis_minus, diag_of(minus, isq));
  s.sqrt_abs = s.sqrt_plus + s.sqrt_minus;
  return s;
}

json split_to_json(const HermitianSplit& split) {
  json ev = json::array();
  for (Eigen::Index i = 0; i < split.eigenvalues.size(); ++i) ev.push_back(split.eigenvalues(i));
  return json{{"A", matrix_to_json(split.A)},
              {"eigenvalues", ev},
              {"eigenvectors", matrix_to_json(split.eigenvectors)},
              {"zero_tol", split.zero_tol},
              {"dim_plus", split.dim_plus()},
              {"dim_minus", split.dim_minus()},
              {"dim_zero", split.dim_zero()}};
}

}  // namespace ibc
