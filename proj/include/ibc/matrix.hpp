// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace ibc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using json = nlohmann::json;

inline constexpr cplx kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotUnitaryError : public Error {
 public:
  using Error::Error;
};

/// The subspace handed in is not complete Lagrangian for the given form.
class NotLagrangianError : public Error {
 public:
  using Error::Error;
};

/// dim E+ != dim E-, so no complete Lagrangian subspace exists.
class SignatureError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

double max_abs(const CMatrix& m);

/// max |M - M^dagger|
double hermiticity_defect(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol);
bool all_finite(const CMatrix& m);
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol);

/// Orthonormal basis (as columns) of ker(m). Singular values below
/// rel_tol * sigma_max count as zero.
CMatrix kernel_basis(const CMatrix& m, double rel_tol = 1e-10);

/// Orthonormal basis of the column space of m, same rank rule.
CMatrix range_basis(const CMatrix& m, double rel_tol = 1e-10);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Pauli matrix sigma_k for k = 1, 2, 3; k = 0 gives the identity.
CMatrix pauli(int k);

CMatrix hermitian_part(const CMatrix& m);

// Nested arrays of [re, im] pairs. Round trip is exact for doubles.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

}  // namespace ibc
