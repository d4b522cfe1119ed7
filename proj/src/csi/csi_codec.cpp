// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "scan/csi/csi.hpp"
#include "scan/kernels/kernels.hpp"
#include "scan/numerics/rng.hpp"

namespace scan {

namespace {

constexpr uint64_t kProjectionDomain = 0x43534950726F6Aull;  // stream-id domain tag

std::vector<double> make_projection(uint64_t seed, std::size_t b, std::size_t dim) {
  RngStream rng(seed, stream_key(kProjectionDomain, b));
  std::vector<double> a(b * dim);
  const double sd = 1.0 / std::sqrt(static_cast<double>(b));
  for (auto& v : a) v = sd * rng.normal();
  return a;
}

// Regeneration is deterministic, so a per-process cache is purely an
// optimization; entries are keyed by (seed, B, dim).
const std::vector<double>& projection_cached(uint64_t seed, std::size_t b, std::size_t dim) {
  struct Key {
    uint64_t seed;
    std::size_t b, dim;
    bool operator<(const Key& o) const {
      return std::tie(seed, b, dim) < std::tie(o.seed, o.b, o.dim);
    }
  };
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[Key{seed, b, dim}];
  if (!slot) slot = std::make_unique<std::vector<double>>(make_projection(seed, b, dim));
  return *slot;
}

}  // namespace

LengthSet::LengthSet(std::vector<int> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("LengthSet: need at least one length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0) throw std::invalid_argument("LengthSet: lengths must be positive");
    if (i > 0 && values[i] <= values[i - 1])
      throw std::invalid_argument("LengthSet: lengths must be strictly ascending");
  }
}

CsiCodeword encode_csi(const CMatrix& h, int b, uint64_t seed) {
  const std::size_t dim = 2 * h.rows() * h.cols();
  if (b < 1 || static_cast<std::size_t>(b) > dim)
    throw std::invalid_argument("encode_csi: B out of range [1, 2*n_rx*n_tx]");

  const BeamspaceCsi bs = to_beamspace(h);
  CsiCodeword cw;
  cw.length = static_cast<uint32_t>(b);
  cw.projection_seed = seed;
  cw.n_rx = static_cast<uint32_t>(h.rows());
  cw.n_tx = static_cast<uint32_t>(h.cols());

  if (static_cast<std::size_t>(b) == dim) {
    cw.values = bs.real_form;  // identity mode
    return cw;
  }
  const std::vector<double>& a = projection_cached(seed, b, dim);
  cw.values.resize(b);
  for (int i = 0; i < b; ++i)
    cw.values[i] = kern::dot(a.data() + static_cast<std::size_t>(i) * dim,
                             bs.real_form.data(), dim);
  return cw;
}

CMatrix decode_csi(const CsiCodeword& cw, int sparsity_override) {
  const std::size_t dim = 2 * static_cast<std::size_t>(cw.n_rx) * cw.n_tx;
  if (cw.values.size() != cw.length)
    throw std::invalid_argument("decode_csi: codeword length/values mismatch");

  if (cw.length == dim) return from_realform(cw.values, cw.n_rx, cw.n_tx);

  const std::size_t sparsity =
      sparsity_override > 0 ? static_cast<std::size_t>(sparsity_override)
                            : std::max<std::size_t>(1, cw.length / 4);
  const std::vector<double>& a = projection_cached(cw.projection_seed, cw.length, dim);
  const std::vector<double> rec = omp_recover(a, cw.length, dim, cw.values, sparsity);
  return from_realform(rec, cw.n_rx, cw.n_tx);
}

double nmse(const CMatrix& h, const CMatrix& h_hat) {
  if (h.rows() != h_hat.rows() || h.cols() != h_hat.cols())
    throw std::invalid_argument("nmse: shape mismatch");
  const double denom = h.frobenius_norm_sq();
  if (denom == 0.0) throw std::invalid_argument("nmse: reference channel is zero");
  return (h - h_hat).frobenius_norm_sq() / denom;
}

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<uint8_t> serialize_codeword(const CsiCodeword& cw) {
  std::vector<uint8_t> out;
  out.reserve(16 + 8 * cw.values.size());
  put_u32(out, cw.length);
  put_u32(out, cw.n_rx);
  put_u32(out, cw.n_tx);
  put_u32(out, static_cast<uint32_t>(cw.projection_seed));  // wire format carries 32 bits
  for (double v : cw.values) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int s = 0; s < 64; s += 8) out.push_back(static_cast<uint8_t>(bits >> s));
  }
  return out;
}

CsiCodeword deserialize_codeword(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 16) throw std::invalid_argument("deserialize_codeword: truncated header");
  CsiCodeword cw;
  cw.length = get_u32(bytes.data());
  cw.n_rx = get_u32(bytes.data() + 4);
  cw.n_tx = get_u32(bytes.data() + 8);
  cw.projection_seed = get_u32(bytes.data() + 12);
  if (bytes.size() != 16 + 8 * static_cast<std::size_t>(cw.length))
    throw std::invalid_argument("deserialize_codeword: body length mismatch");
  cw.values.resize(cw.length);
  for (uint32_t i = 0; i < cw.length; ++i) {
    uint64_t bits = 0;
    for (int s = 0; s < 8; ++s)
      bits |= static_cast<uint64_t>(bytes[16 + 8 * i + s]) << (8 * s);
    std::memcpy(&cw.values[i], &bits, 8);
  }
  return cw;
}

}  // namespace scan
