// SPDX-License-Identifier: Apache-2.0
//
// Semantic distortion outage probability: the chance that a transmitted
// image's reconstruction distortion exceeds the target threshold. Estimated
// by Monte Carlo over a seeded trial tape so competing feedback policies can
// be compared on identical randomness.

#pragma once

#include <functional>
#include <vector>

#include "scan/codec/codec.hpp"
#include "scan/numerics/rng.hpp"

namespace scan {

struct OutageConfig {
  double d_th = 0.0;        // distortion threshold (MSE domain)
  long trials = 0;
  double confidence = 0.99;  // Wilson interval coverage
};

struct OutageEstimate {
  double p_hat = 0.0;
  long trials = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Strict threshold test: outage iff d > d_th.
bool is_outage(double distortion, double d_th);

/// Wilson score interval for a binomial proportion.
OutageEstimate wilson_interval(long outages, long trials, double confidence);

/// Inverse standard normal CDF (Acklam's rational approximation), exposed
/// for the paired tests that need other quantiles.
double inverse_normal_cdf(double p);

/// Core estimator over an injectable distortion source: trial t draws its
/// own RngStream fork, so the tape is reproducible and policy-independent.
using TrialDistortionFn = std::function<double(long trial, RngStream& rng)>;
OutageEstimate estimate_sdop_core(const TrialDistortionFn& trial_distortion,
                                  const OutageConfig& cfg, RngStream rng);

/// Maps an image (with its per-trial channel) to a CSI codeword length.
using LengthPolicyFn =
    std::function<int(std::size_t image_index, const ImageSample& image,
                      const ChannelRealization& ch, double sigma2)>;

struct SdopOptions {
  ChannelParams channel;
  LinkConfig link;
  CodecConfig codec;
  uint64_t projection_seed = 42;
};

/// Full-pipeline estimator: each trial samples an image uniformly, a channel
/// and a noise stream from the tape, asks the policy for B, and runs the
/// transmission. Distortion is compared in the MSE domain.
OutageEstimate estimate_sdop(const std::vector<ImageSample>& images, const SdopOptions& opts,
                             const LengthPolicyFn& policy, const OutageConfig& cfg,
                             RngStream rng);

}  // namespace scan
