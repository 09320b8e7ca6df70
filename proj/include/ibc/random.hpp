// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "ibc/matrix.hpp"

namespace ibc {

using Rng = std::mt19937_64;

/// IBC_SEED from the environment, 0 when unset or unparsable.
std::uint64_t seed_from_env();

/// Entries with independent standard normal real and imaginary parts.
CMatrix random_gaussian(Rng& rng, int rows, int cols);
CVector random_gaussian_vector(Rng& rng, int n);
/// Haar-distributed n x n unitary (QR of a Ginibre matrix, phases fixed).
CMatrix haar_unitary(Rng& rng, int n);
/// Hermitian matrix with the requested inertia: eigenvalues drawn from
/// [0.2, 3] with the given signs, conjugated by a Haar unitary.
CMatrix random_hermitian_with_signature(Rng& rng, int dim_plus, int dim_minus, int dim_zero);
double uniform(Rng& rng, double lo, double hi);

}  // namespace ibc
