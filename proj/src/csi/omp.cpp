// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scan/csi/csi.hpp"
#include "scan/kernels/kernels.hpp"

namespace scan {

// Greedy selection by normalized correlation, least squares on the growing
// support via an incremental modified Gram-Schmidt QR. The residual update
// r -= <q_k, z> q_k keeps the correlation pass the only O(rows*cols) work
// per iteration.
std::vector<double> omp_recover(const std::vector<double>& a, std::size_t rows,
                                std::size_t cols, const std::vector<double>& z,
                                std::size_t sparsity) {
  if (a.size() != rows * cols) throw std::invalid_argument("omp_recover: bad matrix size");
  if (z.size() != rows) throw std::invalid_argument("omp_recover: bad measurement size");
  if (sparsity == 0 || sparsity > rows) sparsity = rows;

  std::vector<double> x(cols, 0.0);
  const double z_norm_sq = kern::sum_sq(z.data(), rows);
  if (z_norm_sq == 0.0) return x;

  // column norms (columns are strided in the row-major layout; accumulate by rows)
  std::vector<double> col_inv_norm(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) col_inv_norm[j] += row[j] * row[j];
  }
  for (auto& v : col_inv_norm) v = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;

  std::vector<double> residual = z;
  std::vector<double> corr(cols);
  std::vector<std::size_t> support;
  std::vector<std::vector<double>> q;       // orthonormal basis of selected columns
  std::vector<std::vector<double>> r_cols;  // R factor, column per selected atom
  std::vector<double> qtz;                  // <q_k, z>

  for (std::size_t it = 0; it < sparsity; ++it) {
    // corr = A^T residual, accumulated row-wise so the inner loop is contiguous
    std::fill(corr.begin(), corr.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      kern::axpy(residual[i], a.data() + i * cols, corr.data(), cols);

    std::size_t best = cols;
    double best_val = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = std::abs(corr[j]) * col_inv_norm[j];
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    if (best == cols || best_val < 1e-13 * std::sqrt(z_norm_sq)) break;

    // gather the chosen column and orthogonalize against the current basis
    std::vector<double> col(rows);
    for (std::size_t i = 0; i < rows; ++i) col[i] = a[i * cols + best];
    std::vector<double> rcol(support.size() + 1, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double proj = kern::dot(q[k].data(), col.data(), rows);
      rcol[k] = proj;
      kern::axpy(-proj, q[k].data(), col.data(), rows);
    }
    const double diag = std::sqrt(kern::sum_sq(col.data(), rows));
    if (diag < 1e-12) {
      col_inv_norm[best] = 0.0;  // dependent column, never pick it again
      continue;
    }
    rcol.back() = diag;
    kern::scale(1.0 / diag, col.data(), rows);

    const double w = kern::dot(col.data(), residual.data(), rows);
    kern::axpy(-w, col.data(), residual.data(), rows);

    support.push_back(best);
    q.push_back(std::move(col));
    r_cols.push_back(std::move(rcol));
    qtz.push_back(w);
    col_inv_norm[best] = 0.0;

    if (kern::sum_sq(residual.data(), rows) <= 1e-26 * z_norm_sq) break;
  }

  // back-substitute R beta = qtz
  const std::size_t k = support.size();
  std::vector<double> beta(k, 0.0);
  for (std::size_t ii = k; ii-- > 0;) {
    double acc = qtz[ii];
    for (std::size_t jj = ii + 1; jj < k; ++jj) acc -= r_cols[jj][ii] * beta[jj];
    beta[ii] = acc / r_cols[ii][ii];
  }
  for (std::size_t ii = 0; ii < k; ++ii) x[support[ii]] = beta[ii];
  return x;
}

}  // namespace scan
