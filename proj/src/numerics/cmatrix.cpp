// SPDX-License-Identifier: Apache-2.0

#include "scan/numerics/cmatrix.hpp"

#include <cmath>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("CMatrix: dimension mismatch in product");
  CMatrix out(rows_, rhs.cols_);
  // C(i,:) += A(i,k) * B(k,:) keeps the inner loop contiguous
  for (std::size_t i = 0; i < rows_; ++i) {
    cd* ci = out.row(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      const cd a = (*this)(i, k);
      if (a != cd{}) kern::caxpy(a, rhs.row(k), ci, rhs.cols_);
    }
  }
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("CMatrix: dimension mismatch in difference");
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
  return out;
}

std::vector<cd> CMatrix::apply(const std::vector<cd>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("CMatrix: vector length mismatch");
  std::vector<cd> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const cd* r = row(i);
    cd acc{};
    for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<cd> CMatrix::apply_adjoint(const std::vector<cd>& y) const {
  if (y.size() != rows_) throw std::invalid_argument("CMatrix: vector length mismatch");
  std::vector<cd> x(cols_);
  for (std::size_t k = 0; k < rows_; ++k) kern::caxpy(std::conj(y[k]), row(k), x.data(), cols_);
  // x = sum_k conj(A(k,:))^T ... accumulate conj(row) * y_k == conj(conj(y_k) * row)
  for (auto& v : x) v = std::conj(v);
  return x;
}

double CMatrix::frobenius_norm_sq() const { return kern::csum_sq(data_.data(), data_.size()); }

double CMatrix::frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

bool CMatrix::all_finite() const {
  for (const cd& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double unitarity_error(const CMatrix& a) {
  const CMatrix g = a.adjoint() * a;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const cd expect = (i == j) ? cd{1.0, 0.0} : cd{0.0, 0.0};
      worst = std::max(worst, std::abs(g(i, j) - expect));
    }
  return worst;
}

}  // namespace scan
