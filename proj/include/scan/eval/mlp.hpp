// SPDX-License-Identifier: Apache-2.0
//
// Minimal dense network with hand-written backprop: linear layers with
// rectified-linear hidden activations and a linear output layer. The
// gradients are verified against central finite differences in the tests,
// so keep forward and backward in one place.

#pragma once

#include <cstddef>
#include <vector>

#include "scan/numerics/rng.hpp"

namespace scan {

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;  // out x in, row-major
  std::vector<double> b;  // out
};

struct MlpWorkspace {
  std::vector<std::vector<double>> activations;  // input + post-activation per layer
  std::vector<std::vector<double>> pre;          // pre-activation per layer
};

struct MlpGrads {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;
};

class Mlp {
 public:
  Mlp() = default;
  /// dims = {input, hidden..., output}; Xavier-uniform init from rng.
  Mlp(const std::vector<std::size_t>& dims, RngStream& rng);

  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }

  std::vector<double> forward(const std::vector<double>& x, MlpWorkspace* ws = nullptr) const;

  /// Accumulates parameter gradients for d(loss)/d(output) into `grads`
  /// (shape must match; see zero_grads). Requires the workspace captured by
  /// the matching forward call.
  void backward(const std::vector<double>& dout, const MlpWorkspace& ws, MlpGrads& grads) const;

  MlpGrads zero_grads() const;
  void apply_update(const MlpGrads& grads, double step);

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// Flat view over every parameter, for the finite-difference harness.
  std::size_t parameter_count() const;
  double get_parameter(std::size_t idx) const;
  void set_parameter(std::size_t idx, double value);
  double get_gradient(const MlpGrads& grads, std::size_t idx) const;

  bool all_finite() const;

 private:
  std::vector<DenseLayer> layers_;
};

}  // namespace scan
