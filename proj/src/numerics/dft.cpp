// SPDX-License-Identifier: Apache-2.0

#include "scan/numerics/dft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace scan {

CMatrix unitary_dft(std::size_t n) {
  if (n == 0) throw std::invalid_argument("unitary_dft: n must be >= 1");
  CMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      // reduce j*k mod n before forming the angle to keep precision at large n
      const double frac = static_cast<double>((j * k) % n) / static_cast<double>(n);
      const double angle = -2.0 * std::numbers::pi * frac;
      f(j, k) = cd{norm * std::cos(angle), norm * std::sin(angle)};
    }
  }
  return f;
}

const CMatrix& unitary_dft_cached(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, CMatrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, unitary_dft(n)).first;
  return it->second;
}

}  // namespace scan
