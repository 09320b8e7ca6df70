// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/matrix.hpp"

#include <cmath>

namespace ibc {

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return max_abs(m - m.adjoint());
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

namespace {

Eigen::Index numerical_rank(const RVector& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * smax) ++r;
  return r;
}

}  // namespace

CMatrix kernel_basis(const CMatrix& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::Index r = numerical_rank(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - r);
}

CMatrix range_basis(const CMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
  const Eigen::Index r = numerical_rank(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix pauli(int k) {
  CMatrix s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw DimensionError("pauli: index must be 0..3");
  }
  return s;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

cplx entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw SchemaError("matrix entry must be a number or a [re, im] pair");
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return CMatrix(0, 0);
  if (!j[0].is_array()) throw SchemaError("matrix row must be an array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw SchemaError("matrix rows must all have the same length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = entry_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!all_finite(m)) throw SchemaError("matrix has non-finite entries");
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("vector must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = entry_from_json(j[i]);
  return v;
}

}  // namespace ibc
