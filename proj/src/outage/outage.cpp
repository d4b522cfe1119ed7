// SPDX-License-Identifier: Apache-2.0

#include "scan/outage/outage.hpp"

#include <cmath>
#include <stdexcept>

#include "scan/csi/csi.hpp"
#include "scan/eval/evaluator.hpp"

namespace scan {

bool is_outage(double distortion, double d_th) { return distortion > d_th; }

double inverse_normal_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
  // Acklam's rational approximation, |relative error| < 1.15e-9
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

OutageEstimate wilson_interval(long outages, long trials, double confidence) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (outages < 0 || outages > trials)
    throw std::invalid_argument("wilson_interval: outages out of range");
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(outages) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  OutageEstimate est;
  est.p_hat = p;
  est.trials = trials;
  est.ci_low = std::max(0.0, center - half);
  est.ci_high = std::min(1.0, center + half);
  return est;
}

OutageEstimate estimate_sdop_core(const TrialDistortionFn& trial_distortion,
                                  const OutageConfig& cfg, RngStream rng) {
  if (cfg.trials < 1) throw std::invalid_argument("estimate_sdop_core: trials must be >= 1");
  if (!(cfg.d_th > 0.0)) throw std::invalid_argument("estimate_sdop_core: d_th must be > 0");
  long outages = 0;
  for (long t = 0; t < cfg.trials; ++t) {
    RngStream trial_rng = rng.fork(static_cast<uint64_t>(t));
    const double d = trial_distortion(t, trial_rng);
    if (is_outage(d, cfg.d_th)) ++outages;
  }
  return wilson_interval(outages, cfg.trials, cfg.confidence);
}

OutageEstimate estimate_sdop(const std::vector<ImageSample>& images, const SdopOptions& opts,
                             const LengthPolicyFn& policy, const OutageConfig& cfg,
                             RngStream rng) {
  if (images.empty()) throw std::invalid_argument("estimate_sdop: no images");
  auto trial_fn = [&](long /*trial*/, RngStream& trial_rng) {
    const std::size_t img_idx = trial_rng.uniform_below(images.size());
    const ChannelRealization ch = sample_channel(opts.channel, trial_rng.fork(1));
    const int b = policy(img_idx, images[img_idx], ch, opts.link.noise_variance);
    const CsiCodeword cw = encode_csi(ch.h, b, opts.projection_seed);
    RngStream noise = trial_rng.fork(2);
    const TransmitResult res =
        transmit_image(images[img_idx], ch, cw, opts.link, opts.codec, noise);
    return mse_loss(images[img_idx], res.s_hat);
  };
  return estimate_sdop_core(trial_fn, cfg, rng);
}

}  // namespace scan
