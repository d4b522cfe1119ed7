// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scan/codec/dct.hpp"
#include "scan/eval/evaluator.hpp"
#include "scan/numerics/svd.hpp"

namespace scan {

std::vector<double> extract_features(const ImageSample& s, const CsiCodeword& cw_coarse,
                                     double sigma2, const FeatureConfig& cfg) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("extract_features: sigma2 must be > 0");
  const std::size_t n = static_cast<std::size_t>(s.n());
  const std::size_t n_bands = cfg.n_bands;
  const std::size_t t_levels = cfg.lambda.levels();

  std::vector<double> f;
  f.reserve(cfg.feature_dim());

  const auto coeffs = image_to_coeffs(s);
  const double total = [&] {
    double acc = 0.0;
    for (double c : coeffs) acc += c * c;
    return acc;
  }();
  const double inv_total = total > 0.0 ? 1.0 / total : 0.0;

  // (a) band energy fractions
  for (std::size_t b = 0; b < n_bands; ++b) {
    const std::size_t lo = b * n / n_bands;
    const std::size_t hi = (b + 1) * n / n_bands;
    double e = 0.0;
    for (std::size_t i = lo; i < hi; ++i) e += coeffs[i] * coeffs[i];
    f.push_back(e * inv_total);
  }

  // (b) energy compaction profile: fraction retained at a truncation depth
  // proportional to each candidate codeword length
  const std::size_t k = static_cast<std::size_t>(cfg.rho * static_cast<double>(n));
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + coeffs[i] * coeffs[i];
  for (std::size_t t = 0; t < t_levels; ++t) {
    const double frac = static_cast<double>(cfg.lambda.values[t]) /
                        static_cast<double>(cfg.lambda.longest());
    const std::size_t depth =
        std::min(n, static_cast<std::size_t>(std::llround(2.0 * static_cast<double>(k) * frac)));
    f.push_back(prefix[depth] * inv_total);
  }

  // (c) mean squared pixel gradient
  {
    double acc = 0.0;
    std::size_t count = 0;
    const std::size_t w = s.width, h = s.height, c = s.channels;
    for (std::size_t ch = 0; ch < c; ++ch)
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t col = 0; col < w; ++col) {
          const double v = s.pixels[(r * w + col) * c + ch];
          if (col + 1 < w) {
            const double dx = s.pixels[(r * w + col + 1) * c + ch] - v;
            acc += dx * dx;
            ++count;
          }
          if (r + 1 < h) {
            const double dy = s.pixels[((r + 1) * w + col) * c + ch] - v;
            acc += dy * dy;
            ++count;
          }
        }
    f.push_back(count > 0 ? acc / static_cast<double>(count) : 0.0);
  }

  // (d) leading singular values of the coarse channel estimate
  {
    const CMatrix h_coarse = decode_csi(cw_coarse);
    const SvdResult r = svd(h_coarse);
    for (std::size_t i = 0; i < cfg.n_streams; ++i)
      f.push_back(i < r.sigma.size() ? r.sigma[i] : 0.0);
  }

  // (e) noise level
  f.push_back(std::log(sigma2));

  return f;
}

std::vector<double> band_errors(const ImageSample& s, const ImageSample& s_hat,
                                std::size_t n_bands) {
  if (s.width != s_hat.width || s.height != s_hat.height || s.channels != s_hat.channels)
    throw std::invalid_argument("band_errors: shape mismatch");
  const auto ca = image_to_coeffs(s);
  const auto cb = image_to_coeffs(s_hat);
  const std::size_t n = ca.size();
  std::vector<double> out(n_bands, 0.0);
  for (std::size_t b = 0; b < n_bands; ++b) {
    const std::size_t lo = b * n / n_bands;
    const std::size_t hi = (b + 1) * n / n_bands;
    double e = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = ca[i] - cb[i];
      e += d * d;
    }
    out[b] = std::log1p(e);
  }
  return out;
}

}  // namespace scan
