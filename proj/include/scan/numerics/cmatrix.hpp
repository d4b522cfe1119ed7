// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrix with just the operations the link simulation needs.
// Row-major, double precision per part.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace scan {

using cd = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cd* row(std::size_t i) { return data_.data() + i * cols_; }
  const cd* row(std::size_t i) const { return data_.data() + i * cols_; }

  cd* data() { return data_.data(); }
  const cd* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;

  /// A * x for a column vector x (x.size() == cols()).
  std::vector<cd> apply(const std::vector<cd>& x) const;

  /// A^H * y (y.size() == rows()).
  std::vector<cd> apply_adjoint(const std::vector<cd>& y) const;

  double frobenius_norm() const;
  double frobenius_norm_sq() const;
  bool all_finite() const;

  bool operator==(const CMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cd> data_;
};

/// Max-norm of (A^H A - I); convenience for unitarity checks in tests.
double unitarity_error(const CMatrix& a);

}  // namespace scan
