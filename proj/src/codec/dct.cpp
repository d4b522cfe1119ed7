// SPDX-License-Identifier: Apache-2.0

#include "scan/codec/dct.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan {

std::vector<double> dct_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dct_matrix: n must be >= 1");
  std::vector<double> d(n * n);
  const double f0 = std::sqrt(1.0 / static_cast<double>(n));
  const double f = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      d[k * n + i] = (k == 0 ? f0 : f) *
                     std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
  return d;
}

namespace {

const std::vector<double>& dct_matrix_cached(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, dct_matrix(n)).first;
  return it->second;
}

// out = M * X with M (n x n) and X (n x w), all row-major
std::vector<double> left_mul(const std::vector<double>& m, const std::vector<double>& x,
                             std::size_t n, std::size_t w) {
  std::vector<double> out(n * w, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      kern::axpy(m[i * n + k], x.data() + k * w, out.data() + i * w, w);
  return out;
}

// out = X * M^T with X (h x n) and M (n x n): out(i,:) = sum_k X(i,k) M(:,k)... equivalently
// out(i,j) = dot(X(i,:), M(j,:)) since both are row-major
std::vector<double> right_mul_t(const std::vector<double>& x, const std::vector<double>& m,
                                std::size_t h, std::size_t n) {
  std::vector<double> out(h * n);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = kern::dot(x.data() + i * n, m.data() + j * n, n);
  return out;
}

}  // namespace

std::vector<double> dct2(const std::vector<double>& plane, std::size_t h, std::size_t w) {
  if (plane.size() != h * w) throw std::invalid_argument("dct2: plane size mismatch");
  const auto& dh = dct_matrix_cached(h);
  const auto& dw = dct_matrix_cached(w);
  return right_mul_t(left_mul(dh, plane, h, w), dw, h, w);
}

std::vector<double> idct2(const std::vector<double>& coeffs, std::size_t h, std::size_t w) {
  if (coeffs.size() != h * w) throw std::invalid_argument("idct2: coeff size mismatch");
  const auto& dh = dct_matrix_cached(h);
  const auto& dw = dct_matrix_cached(w);
  // X = Dh^T C Dw; with row-major storage Dh^T C is a left multiply by the
  // transpose: out(i,:) = sum_k Dh(k,i) C(k,:)
  std::vector<double> tmp(h * w, 0.0);
  for (std::size_t k = 0; k < h; ++k)
    for (std::size_t i = 0; i < h; ++i)
      kern::axpy(dh[k * h + i], coeffs.data() + k * w, tmp.data() + i * w, w);
  // tmp * Dw: out(i,j) = sum_k tmp(i,k) Dw(k,j) -> accumulate rows of Dw
  std::vector<double> out(h * w, 0.0);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t k = 0; k < w; ++k)
      kern::axpy(tmp[i * w + k], dw.data() + k * w, out.data() + i * w, w);
  return out;
}

const std::vector<std::pair<int, int>>& zigzag_order(std::size_t h, std::size_t w) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<int, int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(h, w);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<std::pair<int, int>> order;
  order.reserve(h * w);
  const int hh = static_cast<int>(h), ww = static_cast<int>(w);
  for (int s = 0; s <= hh + ww - 2; ++s) {
    if (s % 2 == 0) {  // walk up-right
      for (int r = std::min(s, hh - 1); r >= 0 && s - r < ww; --r)
        order.emplace_back(r, s - r);
    } else {  // walk down-left
      for (int c = std::min(s, ww - 1); c >= 0 && s - c < hh; --c)
        order.emplace_back(s - c, c);
    }
  }
  return cache.emplace(key, std::move(order)).first->second;
}

}  // namespace scan
