#pragma once

#include <random>

#include "tenfold/linalg.hpp"

namespace tenfold {

using Rng = std::mt19937_64;

/// Complex matrix with iid standard complex Gaussian entries.
CMatrix random_gaussian(int rows, int cols, Rng& rng);
/// Haar-distributed unitary.
CMatrix random_unitary(int n, Rng& rng);
/// Haar-distributed special orthogonal (as a complex matrix with zero imaginary part).
CMatrix random_special_orthogonal(int n, Rng& rng);
/// Random hermitian matrix with unit-scale entries.
CMatrix random_hermitian(int n, Rng& rng);
/// Random element of the Lie algebra of Sp(M), scaled to operator norm `norm`.
CMatrix random_sp_algebra(int two_m, Rng& rng, double norm = 1.0);

}  // namespace tenfold
