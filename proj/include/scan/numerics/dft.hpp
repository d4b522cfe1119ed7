// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "scan/numerics/cmatrix.hpp"

namespace scan {

/// Unitary DFT matrix: F[j,k] = exp(-2*pi*i*j*k/n) / sqrt(n).
/// Throws std::invalid_argument for n == 0.
CMatrix unitary_dft(std::size_t n);

/// Cached variant (the simulation reuses the same two sizes everywhere).
const CMatrix& unitary_dft_cached(std::size_t n);

}  // namespace scan
