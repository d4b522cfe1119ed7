// SPDX-License-Identifier: Apache-2.0
//
// Splittable counter-seeded RNG. A stream is identified by
// (master_seed, stream_id); equal identities reproduce the exact same draw
// sequence, distinct stream ids give statistically independent streams.
// The integer sequence is pure 64-bit arithmetic and therefore identical
// across platforms.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace scan {

uint64_t mix64(uint64_t x);

/// Combine ids into a derived stream key (order-sensitive).
uint64_t stream_key(uint64_t a, uint64_t b);
uint64_t stream_key(uint64_t a, uint64_t b, uint64_t c);

class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(uint64_t master_seed, uint64_t stream_id);

  uint64_t master_seed() const { return master_; }
  uint64_t stream_id() const { return stream_; }

  /// Independent child stream; does not disturb this stream's state.
  RngStream fork(uint64_t key) const { return RngStream(master_, stream_key(stream_, key)); }

  uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos();
  /// Uniform integer in [0, n).
  uint64_t uniform_below(uint64_t n);

  /// Two independent standard normals (Box-Muller).
  void normal_pair(double& a, double& b);
  double normal();

  /// Circularly-symmetric complex normal, E|z|^2 = variance.
  std::complex<double> normal_complex(double variance);

 private:
  uint64_t master_;
  uint64_t stream_;
  uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// n i.i.d. CN(0, variance) draws.
std::vector<std::complex<double>> gaussian_complex(RngStream& rng, std::size_t n,
                                                   double variance);

}  // namespace scan
