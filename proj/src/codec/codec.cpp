// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scan/codec/codec.hpp"
#include "scan/codec/dct.hpp"
#include "scan/kernels/kernels.hpp"
#include "scan/numerics/svd.hpp"

namespace scan {

namespace {

constexpr double kGainFloor = 1e-9;  // below this a mode carries nothing

void check_image(const ImageSample& s) {
  if (s.width <= 0 || s.height <= 0 || s.channels <= 0)
    throw std::invalid_argument("ImageSample: nonpositive dimensions");
  if (s.pixels.size() != static_cast<std::size_t>(s.n()))
    throw std::invalid_argument("ImageSample: pixel count mismatch");
}

}  // namespace

std::vector<double> waterfill_gains(const std::vector<double>& mode_sigma, double sigma2) {
  const std::size_t d = mode_sigma.size();
  std::vector<double> gains(d, 1.0);
  if (d == 0) return gains;

  // inverse effective gains; inactive modes are the zero eigenmodes
  std::vector<double> cost(d, 0.0);
  std::vector<bool> active(d);
  std::size_t n_active = 0;
  for (std::size_t i = 0; i < d; ++i) {
    active[i] = mode_sigma[i] > kGainFloor;
    if (active[i]) {
      cost[i] = sigma2 / (mode_sigma[i] * mode_sigma[i]);
      ++n_active;
    }
  }
  if (n_active == 0) return gains;  // no channel knowledge worth acting on

  // iterative water level: drop modes that would get negative power
  std::vector<double> p(d, 0.0);
  while (true) {
    double cost_sum = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      if (active[i]) cost_sum += cost[i];
    const double mu = (static_cast<double>(d) + cost_sum) / static_cast<double>(n_active);
    bool dropped = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (!active[i]) continue;
      p[i] = mu - cost[i];
      if (p[i] <= 0.0) {
        active[i] = false;
        p[i] = 0.0;
        --n_active;
        dropped = true;
      }
    }
    if (!dropped || n_active == 0) break;
  }
  for (std::size_t i = 0; i < d; ++i) gains[i] = std::sqrt(std::max(p[i], 0.0));
  return gains;
}

std::vector<double> image_to_coeffs(const ImageSample& s) {
  check_image(s);
  const std::size_t w = s.width, h = s.height, c = s.channels;
  const auto& order = zigzag_order(h, w);
  std::vector<double> plane(h * w);
  std::vector<std::vector<double>> plane_coeffs(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t col = 0; col < w; ++col)
        plane[r * w + col] = s.pixels[(r * w + col) * c + ch];
    plane_coeffs[ch] = dct2(plane, h, w);
  }
  std::vector<double> out(static_cast<std::size_t>(s.n()));
  for (std::size_t p = 0; p < order.size(); ++p) {
    const std::size_t idx = static_cast<std::size_t>(order[p].first) * w + order[p].second;
    for (std::size_t ch = 0; ch < c; ++ch) out[p * c + ch] = plane_coeffs[ch][idx];
  }
  return out;
}

ImageSample coeffs_to_image(const std::vector<double>& coeffs, int width, int height,
                            int channels, bool clamp) {
  const std::size_t w = width, h = height, c = channels;
  if (coeffs.size() != w * h * c) throw std::invalid_argument("coeffs_to_image: size mismatch");
  const auto& order = zigzag_order(h, w);
  ImageSample s;
  s.width = width;
  s.height = height;
  s.channels = channels;
  s.pixels.resize(coeffs.size());
  std::vector<double> plane_coeffs(h * w);
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t p = 0; p < order.size(); ++p) {
      const std::size_t idx = static_cast<std::size_t>(order[p].first) * w + order[p].second;
      plane_coeffs[idx] = coeffs[p * c + ch];
    }
    const auto plane = idct2(plane_coeffs, h, w);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t col = 0; col < w; ++col) {
        double v = plane[r * w + col];
        if (clamp) v = std::clamp(v, 0.0, 1.0);
        s.pixels[(r * w + col) * c + ch] = v;
      }
  }
  return s;
}

ImageSample zonal_truncate(const ImageSample& s, std::size_t retained, bool clamp) {
  auto coeffs = image_to_coeffs(s);
  for (std::size_t i = retained; i < coeffs.size(); ++i) coeffs[i] = 0.0;
  return coeffs_to_image(coeffs, s.width, s.height, s.channels, clamp);
}

SymbolVector encode_image(const ImageSample& s, const CMatrix& h_hat, double sigma2,
                          const CodecConfig& cfg) {
  check_image(s);
  const std::size_t n = static_cast<std::size_t>(s.n());
  const std::size_t k = static_cast<std::size_t>(cfg.rho * static_cast<double>(n));
  if (k < 1 || 2 * k < 2)
    throw std::invalid_argument("encode_image: rho*N must be at least 2");

  const auto coeffs = image_to_coeffs(s);
  SymbolVector z;
  z.bandwidth_ratio = static_cast<double>(k) / static_cast<double>(n);
  z.symbols.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double re = (2 * i < n) ? coeffs[2 * i] : 0.0;
    const double im = (2 * i + 1 < n) ? coeffs[2 * i + 1] : 0.0;
    z.symbols[i] = cd{re, im};
  }

  if (cfg.gain_mode) {
    const Precoder p = svd_precoder(h_hat, std::min(cfg.n_streams,
                                                    std::min(h_hat.rows(), h_hat.cols())));
    const auto gains = waterfill_gains(p.sigma, sigma2);
    for (std::size_t i = 0; i < k; ++i) z.symbols[i] *= gains[i % gains.size()];
  }

  const double energy = kern::csum_sq(z.symbols.data(), k);
  const double scale = energy > 0.0 ? std::sqrt(static_cast<double>(k) / energy) : 1.0;
  kern::scale(scale, reinterpret_cast<double*>(z.symbols.data()), 2 * k);
  z.power_scale = scale;
  return z;
}

ImageSample decode_image(const SymbolVector& z_hat, const CMatrix& h_hat, double sigma2,
                         const CodecConfig& cfg, int width, int height, int channels) {
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  const std::size_t k = z_hat.symbols.size();

  std::vector<double> gains(cfg.n_streams, 1.0);
  if (cfg.gain_mode) {
    const Precoder p = svd_precoder(h_hat, std::min(cfg.n_streams,
                                                    std::min(h_hat.rows(), h_hat.cols())));
    gains = waterfill_gains(p.sigma, sigma2);
  }

  std::vector<double> coeffs(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double g = gains[i % gains.size()] * z_hat.power_scale;
    cd v{};
    if (g > kGainFloor) v = z_hat.symbols[i] / g;
    if (2 * i < n) coeffs[2 * i] = v.real();
    if (2 * i + 1 < n) coeffs[2 * i + 1] = v.imag();
  }
  return coeffs_to_image(coeffs, width, height, channels, cfg.clamp);
}

double mse_loss(const ImageSample& s, const ImageSample& s_hat) {
  if (s.width != s_hat.width || s.height != s_hat.height || s.channels != s_hat.channels)
    throw std::invalid_argument("mse_loss: shape mismatch");
  const std::size_t n = s.pixels.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s.pixels[i] - s_hat.pixels[i];
    acc += d * d;
  }
  return acc / static_cast<double>(n);
}

double psnr(const ImageSample& s, const ImageSample& s_hat, double max_val,
            bool* exact_match, double cap) {
  if (!(max_val > 0.0)) throw std::invalid_argument("psnr: max_val must be > 0");
  const double mse = mse_loss(s, s_hat);
  if (mse == 0.0) {
    if (exact_match != nullptr) *exact_match = true;
    return cap;
  }
  if (exact_match != nullptr) *exact_match = false;
  return 10.0 * std::log10(max_val * max_val / mse);
}

std::vector<double> teacher_features(const SymbolVector& z, std::size_t n_bands) {
  if (n_bands == 0) throw std::invalid_argument("teacher_features: n_bands must be >= 1");
  const std::size_t k = z.symbols.size();
  std::vector<double> f(n_bands, 0.0);
  for (std::size_t b = 0; b < n_bands; ++b) {
    const std::size_t lo = b * k / n_bands;
    const std::size_t hi = (b + 1) * k / n_bands;
    double e = 0.0;
    for (std::size_t i = lo; i < hi; ++i) e += std::norm(z.symbols[i]);
    f[b] = std::log1p(e);
  }
  return f;
}

}  // namespace scan
