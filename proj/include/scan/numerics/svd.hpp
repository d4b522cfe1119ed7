// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "scan/numerics/cmatrix.hpp"

namespace scan {

/// Thin SVD, A = U * diag(sigma) * V^H with k = min(rows, cols) columns.
struct SvdResult {
  CMatrix u;                  // rows x k, orthonormal columns
  std::vector<double> sigma;  // k nonnegative values, descending
  CMatrix v;                  // cols x k, orthonormal columns
};

/// One-sided Jacobi SVD. Deterministic: fixed sweep order, and each column
/// of V is rotated so its first entry above 1e-12 in magnitude is real and
/// nonnegative (the matching U column absorbs the same phase).
/// Throws std::invalid_argument on non-finite input or empty dimensions.
SvdResult svd(const CMatrix& a);

/// U * diag(sigma) * V^H, for residual checks.
CMatrix compose_svd(const SvdResult& r);

}  // namespace scan
