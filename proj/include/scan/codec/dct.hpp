// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace scan {

/// Orthonormal DCT-II matrix (n x n, row-major).
std::vector<double> dct_matrix(std::size_t n);

/// 2D orthonormal DCT-II of a single plane (row-major h x w).
std::vector<double> dct2(const std::vector<double>& plane, std::size_t h, std::size_t w);

/// Inverse (DCT-III) of dct2.
std::vector<double> idct2(const std::vector<double>& coeffs, std::size_t h, std::size_t w);

/// Diagonal zigzag scan order for an h x w grid: entry p of the result is
/// the (row, col) visited at position p. Positions are grouped by ascending
/// row+col, alternating direction, so low spatial frequency comes first.
const std::vector<std::pair<int, int>>& zigzag_order(std::size_t h, std::size_t w);

}  // namespace scan
