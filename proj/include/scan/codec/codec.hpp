// SPDX-License-Identifier: Apache-2.0
//
// Channel-adaptive analog image codec. Per-plane 2D DCT, zonal retention of
// the lowest-frequency coefficients in a fixed zigzag order, pairing into
// complex symbols, and per-eigenmode gains from water-filling against the
// estimated channel. The codec is deterministic end to end so every stage
// can be checked against an independent oracle.

#pragma once

#include <cstddef>
#include <vector>

#include "scan/channel/channel.hpp"
#include "scan/csi/csi.hpp"
#include "scan/numerics/cmatrix.hpp"
#include "scan/numerics/rng.hpp"

namespace scan {

struct ImageSample {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> pixels;  // interleaved, row-major, values in [0,1]

  int n() const { return width * height * channels; }
};

struct SymbolVector {
  std::vector<cd> symbols;      // K complex channel symbols, unit average power
  double bandwidth_ratio = 0.0; // K / N
  // Global normalization factor applied by the encoder (automatic gain
  // control side information; rides with the symbols, not through the
  // noisy channel).
  double power_scale = 1.0;
};

struct CodecConfig {
  double rho = 1.0 / 6.0;   // bandwidth ratio K/N
  bool gain_mode = true;    // eigenmode water-filling on/off
  bool clamp = true;        // clamp decoded pixels to [0,1]
  std::size_t n_streams = 2;
};

/// Per-eigenmode power allocation: p_i = max(0, mu - sigma2/s_i^2) with
/// sum p_i = d over the active modes. sigma2 == 0 gives equal allocation.
/// Returned as amplitude gains sqrt(p_i). All-zero modes fall back to ones.
std::vector<double> waterfill_gains(const std::vector<double>& mode_sigma, double sigma2);

/// DCT coefficients of every plane, flattened into one sequence ordered by
/// zigzag position first, plane index second (so the three DC terms lead).
std::vector<double> image_to_coeffs(const ImageSample& s);
ImageSample coeffs_to_image(const std::vector<double>& coeffs, int width, int height,
                            int channels, bool clamp);

/// Zonal truncation reference: keep the first `retained` coefficients, zero
/// the rest, inverse transform. decode(encode(.)) over an identity channel
/// must reproduce this exactly.
ImageSample zonal_truncate(const ImageSample& s, std::size_t retained, bool clamp);

SymbolVector encode_image(const ImageSample& s, const CMatrix& h_hat, double sigma2,
                          const CodecConfig& cfg);
ImageSample decode_image(const SymbolVector& z_hat, const CMatrix& h_hat, double sigma2,
                         const CodecConfig& cfg, int width, int height, int channels);

/// 10 log10(max^2 / mse); an exact match returns `cap` and sets *exact_match.
double psnr(const ImageSample& s, const ImageSample& s_hat, double max_val,
            bool* exact_match = nullptr, double cap = 100.0);

double mse_loss(const ImageSample& s, const ImageSample& s_hat);

/// Band energies of the symbol vector in zigzag order, log(1+energy) per
/// band; the teacher-side feature the evaluator is distilled against.
std::vector<double> teacher_features(const SymbolVector& z, std::size_t n_bands);

struct TransmitResult {
  ImageSample s_hat;
  double psnr_db = 0.0;
  bool psnr_exact = false;
  SymbolVector sent;     // encoder output (pre power scaling)
  CMatrix h_hat;         // CSI the transmitter acted on
};

/// Full link: decode the CSI codeword, precode with the estimate, combine
/// with the true channel's left singular vectors, per-block linear MMSE
/// equalization on the effective d x d channel, then decode the image.
TransmitResult transmit_image(const ImageSample& s, const ChannelRealization& ch,
                              const CsiCodeword& cw, const LinkConfig& link,
                              const CodecConfig& cfg, RngStream& rng);

}  // namespace scan
