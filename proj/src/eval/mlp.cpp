// SPDX-License-Identifier: Apache-2.0

#include "scan/eval/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan {

Mlp::Mlp(const std::vector<std::size_t>& dims, RngStream& rng) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need input and output dims");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer layer;
    layer.in = dims[i];
    layer.out = dims[i + 1];
    if (layer.in == 0 || layer.out == 0) throw std::invalid_argument("Mlp: zero layer dim");
    layer.w.resize(layer.out * layer.in);
    layer.b.assign(layer.out, 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (auto& v : layer.w) v = limit * (2.0 * rng.uniform() - 1.0);
    layers_.push_back(std::move(layer));
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& x, MlpWorkspace* ws) const {
  if (x.size() != input_dim()) throw std::invalid_argument("Mlp::forward: input dim mismatch");
  if (ws != nullptr) {
    ws->activations.assign(1, x);
    ws->pre.clear();
  }
  std::vector<double> cur = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const DenseLayer& l = layers_[li];
    std::vector<double> next(l.out);
    for (std::size_t o = 0; o < l.out; ++o)
      next[o] = l.b[o] + kern::dot(l.w.data() + o * l.in, cur.data(), l.in);
    if (ws != nullptr) ws->pre.push_back(next);
    if (li + 1 < layers_.size())
      for (auto& v : next) v = v > 0.0 ? v : 0.0;  // ReLU on hidden layers
    if (ws != nullptr) ws->activations.push_back(next);
    cur = std::move(next);
  }
  return cur;
}

void Mlp::backward(const std::vector<double>& dout, const MlpWorkspace& ws,
                   MlpGrads& grads) const {
  if (ws.activations.size() != layers_.size() + 1)
    throw std::invalid_argument("Mlp::backward: workspace does not match forward pass");
  std::vector<double> delta = dout;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& l = layers_[li];
    if (delta.size() != l.out) throw std::invalid_argument("Mlp::backward: dout dim mismatch");
    if (li + 1 < layers_.size()) {
      // pass through the ReLU: zero where the pre-activation was negative
      for (std::size_t o = 0; o < l.out; ++o)
        if (ws.pre[li][o] <= 0.0) delta[o] = 0.0;
    }
    const std::vector<double>& input = ws.activations[li];
    for (std::size_t o = 0; o < l.out; ++o) {
      kern::axpy(delta[o], input.data(), grads.w[li].data() + o * l.in, l.in);
      grads.b[li][o] += delta[o];
    }
    if (li > 0) {
      std::vector<double> prev(l.in, 0.0);
      for (std::size_t o = 0; o < l.out; ++o)
        kern::axpy(delta[o], l.w.data() + o * l.in, prev.data(), l.in);
      delta = std::move(prev);
    }
  }
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  for (const auto& l : layers_) {
    g.w.emplace_back(l.w.size(), 0.0);
    g.b.emplace_back(l.b.size(), 0.0);
  }
  return g;
}

void Mlp::apply_update(const MlpGrads& grads, double step) {
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    kern::axpy(-step, grads.w[li].data(), layers_[li].w.data(), layers_[li].w.size());
    kern::axpy(-step, grads.b[li].data(), layers_[li].b.data(), layers_[li].b.size());
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.w.size() + l.b.size();
  return n;
}

double Mlp::get_parameter(std::size_t idx) const {
  for (const auto& l : layers_) {
    if (idx < l.w.size()) return l.w[idx];
    idx -= l.w.size();
    if (idx < l.b.size()) return l.b[idx];
    idx -= l.b.size();
  }
  throw std::out_of_range("Mlp::get_parameter");
}

void Mlp::set_parameter(std::size_t idx, double value) {
  for (auto& l : layers_) {
    if (idx < l.w.size()) {
      l.w[idx] = value;
      return;
    }
    idx -= l.w.size();
    if (idx < l.b.size()) {
      l.b[idx] = value;
      return;
    }
    idx -= l.b.size();
  }
  throw std::out_of_range("Mlp::set_parameter");
}

double Mlp::get_gradient(const MlpGrads& grads, std::size_t idx) const {
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    if (idx < grads.w[li].size()) return grads.w[li][idx];
    idx -= grads.w[li].size();
    if (idx < grads.b[li].size()) return grads.b[li][idx];
    idx -= grads.b[li].size();
  }
  throw std::out_of_range("Mlp::get_gradient");
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_) {
    for (double v : l.w)
      if (!std::isfinite(v)) return false;
    for (double v : l.b)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace scan
