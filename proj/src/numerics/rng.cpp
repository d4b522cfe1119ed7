// SPDX-License-Identifier: Apache-2.0

#include "scan/numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scan {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

// splitmix64 finalizer
uint64_t mix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t stream_key(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b + kGolden)); }

uint64_t stream_key(uint64_t a, uint64_t b, uint64_t c) {
  return stream_key(stream_key(a, b), c);
}

RngStream::RngStream(uint64_t master_seed, uint64_t stream_id)
    : master_(master_seed), stream_(stream_id) {
  // expand (master, stream) into a xoshiro256++ state with splitmix64
  uint64_t z = mix64(master_seed) ^ mix64(stream_id + kGolden);
  for (auto& s : s_) {
    z += kGolden;
    s = mix64(z);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t RngStream::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

uint64_t RngStream::uniform_below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  // rejection sampling to avoid modulo bias
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

void RngStream::normal_pair(double& a, double& b) {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  a = r * std::cos(phi);
  b = r * std::sin(phi);
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double a, b;
  normal_pair(a, b);
  cached_normal_ = b;
  has_cached_normal_ = true;
  return a;
}

std::complex<double> RngStream::normal_complex(double variance) {
  double a, b;
  normal_pair(a, b);
  const double s = std::sqrt(variance * 0.5);
  return {s * a, s * b};
}

std::vector<std::complex<double>> gaussian_complex(RngStream& rng, std::size_t n,
                                                   double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian_complex: variance must be > 0");
  std::vector<std::complex<double>> out(n);
  for (auto& v : out) v = rng.normal_complex(variance);
  return out;
}

}  // namespace scan
