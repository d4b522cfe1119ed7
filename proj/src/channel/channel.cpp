// SPDX-License-Identifier: Apache-2.0

#include "scan/channel/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan {

namespace {

// unit-norm ULA steering vector, half-wavelength spacing
std::vector<cd> steering(std::size_t n, double angle) {
  std::vector<cd> a(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = std::numbers::pi * std::sin(angle);
  for (std::size_t k = 0; k < n; ++k) {
    const double phase = step * static_cast<double>(k);
    a[k] = cd{norm * std::cos(phase), norm * std::sin(phase)};
  }
  return a;
}

double laplacian(RngStream& rng, double scale) {
  const double u = rng.uniform() - 0.5;
  const double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
  return u >= 0.0 ? mag : -mag;
}

}  // namespace

ChannelRealization sample_channel(const ChannelParams& params, RngStream rng) {
  if (params.n_tx == 0 || params.n_rx == 0)
    throw std::invalid_argument("sample_channel: antenna counts must be >= 1");
  if (params.n_clusters == 0 || params.n_rays == 0)
    throw std::invalid_argument("sample_channel: cluster/ray counts must be >= 1");

  ChannelRealization ch;
  ch.params = params;
  ch.seed_master = rng.master_seed();
  ch.seed_stream = rng.stream_id();
  ch.h = CMatrix(params.n_rx, params.n_tx);

  const double scale = std::sqrt(static_cast<double>(params.n_tx * params.n_rx) /
                                 static_cast<double>(params.n_clusters * params.n_rays));
  const double two_pi = 2.0 * std::numbers::pi;

  for (std::size_t cl = 0; cl < params.n_clusters; ++cl) {
    const double aod_center = two_pi * rng.uniform();
    const double aoa_center = two_pi * rng.uniform();
    for (std::size_t ray = 0; ray < params.n_rays; ++ray) {
      const double aod = aod_center + laplacian(rng, params.angle_spread_rad);
      const double aoa = aoa_center + laplacian(rng, params.angle_spread_rad);
      const cd gain = rng.normal_complex(1.0);
      const auto ar = steering(params.n_rx, aoa);
      auto at = steering(params.n_tx, aod);
      for (auto& v : at) v = std::conj(v);  // outer product a_r a_t^H
      const cd w = scale * gain;
      for (std::size_t i = 0; i < params.n_rx; ++i)
        kern::caxpy(w * ar[i], at.data(), ch.h.row(i), params.n_tx);
    }
  }
  return ch;
}

Precoder svd_precoder(const CMatrix& h, std::size_t d) {
  const std::size_t k = std::min(h.rows(), h.cols());
  if (d < 1 || d > k)
    throw std::invalid_argument("svd_precoder: need 1 <= d <= min(n_rx, n_tx)");
  const SvdResult r = svd(h);
  Precoder p;
  p.v = CMatrix(h.cols(), d);
  p.u = CMatrix(h.rows(), d);
  p.sigma.assign(r.sigma.begin(), r.sigma.begin() + d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < h.cols(); ++i) p.v(i, j) = r.v(i, j);
    for (std::size_t i = 0; i < h.rows(); ++i) p.u(i, j) = r.u(i, j);
  }
  const double tol = (r.sigma.empty() ? 0.0 : r.sigma[0]) * 1e-12;
  for (double s : p.sigma)
    if (s <= tol) p.rank_deficient = true;
  return p;
}

Precoder svd_precoder(const ChannelRealization& ch, std::size_t d) {
  return svd_precoder(ch.h, d);
}

std::vector<cd> transmit(const std::vector<cd>& x, const CMatrix& v,
                         const ChannelRealization& ch, double sigma2, RngStream& rng,
                         std::optional<double> power_limit) {
  if (x.size() != v.cols()) throw std::invalid_argument("transmit: x/V dimension mismatch");
  if (v.rows() != ch.h.cols()) throw std::invalid_argument("transmit: V/H dimension mismatch");
  if (sigma2 < 0.0) throw std::invalid_argument("transmit: sigma2 must be >= 0");

  const std::vector<cd> vx = v.apply(x);
  if (power_limit) {
    const double p = kern::csum_sq(vx.data(), vx.size());
    if (p > *power_limit * (1.0 + 1e-6))
      throw std::domain_error("transmit: power constraint violated");
  }
  std::vector<cd> y = ch.h.apply(vx);
  if (sigma2 > 0.0) {
    for (auto& yi : y) yi += rng.normal_complex(sigma2);
  }
  return y;
}

std::vector<cd> combine(const std::vector<cd>& y, const CMatrix& u) {
  if (y.size() != u.rows()) throw std::invalid_argument("combine: y/U dimension mismatch");
  return u.apply_adjoint(y);
}

double snr_db(double power, double sigma2) {
  if (!(power > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("snr_db: power and sigma2 must be > 0");
  return 10.0 * std::log10(power / sigma2);
}

double noise_variance_for_snr_db(double power, double snr) {
  if (!(power > 0.0)) throw std::invalid_argument("noise_variance_for_snr_db: power must be > 0");
  return power / std::pow(10.0, snr / 10.0);
}

double power_normalize(std::vector<std::vector<cd>>& blocks, const CMatrix& v, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("power_normalize: power must be > 0");
  if (blocks.empty()) return 1.0;
  double total = 0.0;
  for (const auto& b : blocks) {
    const std::vector<cd> vb = v.apply(b);
    total += kern::csum_sq(vb.data(), vb.size());
  }
  if (total == 0.0) return 1.0;
  const double mean = total / static_cast<double>(blocks.size());
  const double scale = std::sqrt(power / mean);
  for (auto& b : blocks) kern::scale(scale, reinterpret_cast<double*>(b.data()), 2 * b.size());
  return scale;
}

}  // namespace scan
