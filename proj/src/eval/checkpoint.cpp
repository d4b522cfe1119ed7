// SPDX-License-Identifier: Apache-2.0

#include "scan/eval/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace scan {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'E', 'V'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
               static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(bits >> (8 * i));
  out.write(b, 8);
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void put_net(std::ostream& out, const Mlp& net) {
  put_u32(out, static_cast<uint32_t>(net.layers().size()));
  for (const auto& l : net.layers()) {
    put_u32(out, static_cast<uint32_t>(l.in));
    put_u32(out, static_cast<uint32_t>(l.out));
    for (double v : l.w) put_f64(out, v);
    for (double v : l.b) put_f64(out, v);
  }
}

Mlp get_net(std::istream& in) {
  const uint32_t n_layers = get_u32(in);
  if (n_layers == 0 || n_layers > 64) throw std::runtime_error("checkpoint: bad layer count");
  Mlp net;
  for (uint32_t li = 0; li < n_layers; ++li) {
    DenseLayer l;
    l.in = get_u32(in);
    l.out = get_u32(in);
    if (l.in == 0 || l.out == 0 || l.in > 1 << 20 || l.out > 1 << 20)
      throw std::runtime_error("checkpoint: bad layer dims");
    l.w.resize(l.out * l.in);
    l.b.resize(l.out);
    for (auto& v : l.w) v = get_f64(in);
    for (auto& v : l.b) v = get_f64(in);
    net.layers().push_back(std::move(l));
  }
  return net;
}

}  // namespace

void save_checkpoint(const EvaluatorModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_f64(out, m.lambda_weight);
  put_f64(out, m.b_scale);
  put_u32(out, static_cast<uint32_t>(m.features.n_bands));
  put_f64(out, m.features.rho);
  put_u32(out, static_cast<uint32_t>(m.features.n_streams));
  put_u32(out, static_cast<uint32_t>(m.features.coarse_length));
  put_u32(out, static_cast<uint32_t>(m.features.lambda.levels()));
  for (int v : m.features.lambda.values) put_u32(out, static_cast<uint32_t>(v));
  put_net(out, m.content_net);
  put_net(out, m.residual_net);
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

EvaluatorModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_checkpoint: not an evaluator checkpoint");
  if (get_u32(in) != kVersion)
    throw std::runtime_error("load_checkpoint: unsupported version");

  EvaluatorModel m;
  m.lambda_weight = get_f64(in);
  m.b_scale = get_f64(in);
  m.features.n_bands = get_u32(in);
  m.features.rho = get_f64(in);
  m.features.n_streams = get_u32(in);
  m.features.coarse_length = static_cast<int>(get_u32(in));
  const uint32_t t_levels = get_u32(in);
  if (t_levels == 0 || t_levels > 1024) throw std::runtime_error("load_checkpoint: bad length set");
  std::vector<int> lengths(t_levels);
  for (auto& v : lengths) v = static_cast<int>(get_u32(in));
  m.features.lambda = LengthSet(lengths);
  m.content_net = get_net(in);
  m.residual_net = get_net(in);
  return m;
}

}  // namespace scan
