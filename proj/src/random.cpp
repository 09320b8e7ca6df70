// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/random.hpp"

#include <cstdlib>
#include <string>

namespace ibc {

std::uint64_t seed_from_env() {
  const char* s = std::getenv("IBC_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    return 0;
  }
}

CMatrix random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = {re, im};
    }
  return m;
}

CVector random_gaussian_vector(Rng& rng, int n) { return random_gaussian(rng, n, 1).col(0); }

CMatrix haar_unitary(Rng& rng, int n) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix z = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CMatrix random_hermitian_with_signature(Rng& rng, int dim_plus, int dim_minus, int dim_zero) {
  const int n = dim_plus + dim_minus + dim_zero;
  RVector d(n);
  for (int k = 0; k < dim_plus; ++k) d(k) = uniform(rng, 0.2, 3.0);
  for (int k = 0; k < dim_minus; ++k) d(dim_plus + k) = -uniform(rng, 0.2, 3.0);
  for (int k = 0; k < dim_zero; ++k) d(dim_plus + dim_minus + k) = 0.0;
  const CMatrix u = haar_unitary(rng, n);
  return hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint());
}

}  // namespace ibc
