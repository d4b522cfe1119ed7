// SPDX-License-Identifier: Apache-2.0
//
// Clustered narrowband mmWave MIMO channel: generation, SVD precoding,
// transmission with AWGN, combining, and the power bookkeeping around them.

#pragma once

#include <optional>
#include <vector>

#include "scan/numerics/cmatrix.hpp"
#include "scan/numerics/rng.hpp"
#include "scan/numerics/svd.hpp"

namespace scan {

struct ChannelParams {
  std::size_t n_tx = 16;
  std::size_t n_rx = 16;
  std::size_t n_clusters = 4;
  std::size_t n_rays = 5;
  double angle_spread_rad = 7.5 * 3.14159265358979323846 / 180.0;
};

struct ChannelRealization {
  CMatrix h;  // n_rx x n_tx
  ChannelParams params;
  uint64_t seed_master = 0;
  uint64_t seed_stream = 0;
};

struct LinkConfig {
  double power = 1.0;
  double noise_variance = 1.0;
  std::size_t n_streams = 2;
};

/// Sum over clusters/rays of complex-gain weighted ULA steering outer
/// products, scaled so E||H||_F^2 = n_tx * n_rx.
ChannelRealization sample_channel(const ChannelParams& params, RngStream rng);

struct Precoder {
  CMatrix v;                  // n_tx x d
  CMatrix u;                  // n_rx x d
  std::vector<double> sigma;  // d values, descending
  bool rank_deficient = false;
};

/// First d singular triplets of H (V for transmit precoding, U for the
/// receive combiner). Zero singular values are kept and flagged.
Precoder svd_precoder(const CMatrix& h, std::size_t d);
Precoder svd_precoder(const ChannelRealization& ch, std::size_t d);

/// y = H V x + n with n ~ CN(0, sigma2 I); sigma2 == 0 is exact.
/// When power_limit is set, ||Vx||^2 > power_limit * (1 + 1e-6) raises
/// std::domain_error (the power-constraint violation path).
std::vector<cd> transmit(const std::vector<cd>& x, const CMatrix& v,
                         const ChannelRealization& ch, double sigma2, RngStream& rng,
                         std::optional<double> power_limit = std::nullopt);

/// x_hat = U^H y.
std::vector<cd> combine(const std::vector<cd>& y, const CMatrix& u);

/// 10 log10(P / sigma2). Nonpositive inputs raise std::invalid_argument.
double snr_db(double power, double sigma2);

/// sigma2 such that snr_db(power, sigma2) == snr.
double noise_variance_for_snr_db(double power, double snr);

/// Applies one global scalar to all blocks so the mean of ||V x_j||^2 over
/// blocks equals power. All-zero input is returned unchanged (scale 1).
/// Returns the scalar applied.
double power_normalize(std::vector<std::vector<cd>>& blocks, const CMatrix& v, double power);

}  // namespace scan
