// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>

#include "scan/codec/codec.hpp"
#include "scan/kernels/kernels.hpp"

namespace scan {

namespace {

// Partial-pivot LU solve of a small complex system; returns false when a
// pivot collapses (then the caller regularizes instead).
bool lu_solve(CMatrix a, std::vector<cd> b, std::vector<cd>& x) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        piv = r;
      }
    }
    if (best < 1e-300) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cd f = a(r, col) / a(col, col);
      if (f == cd{}) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, cd{});
  for (std::size_t i = n; i-- > 0;) {
    cd acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return true;
}

// x = (G^H G + lambda I)^-1 G^H r; with lambda == 0 it degrades to a direct
// solve of G x = r when G is invertible.
std::vector<cd> equalize(const CMatrix& g, double lambda, const std::vector<cd>& r) {
  const std::size_t d = g.cols();
  std::vector<cd> x;
  if (lambda == 0.0) {
    if (lu_solve(g, r, x)) return x;
    lambda = 1e-12 * g.frobenius_norm_sq() / static_cast<double>(d) + 1e-300;
  }
  CMatrix a = g.adjoint() * g;
  for (std::size_t i = 0; i < d; ++i) a(i, i) += lambda;
  const std::vector<cd> rhs = g.apply_adjoint(r);
  if (!lu_solve(a, rhs, x)) x.assign(d, cd{});
  return x;
}

}  // namespace

TransmitResult transmit_image(const ImageSample& s, const ChannelRealization& ch,
                              const CsiCodeword& cw, const LinkConfig& link,
                              const CodecConfig& cfg, RngStream& rng) {
  if (link.n_streams != cfg.n_streams)
    throw std::invalid_argument("transmit_image: link/codec stream counts differ");
  if (!(link.power > 0.0)) throw std::invalid_argument("transmit_image: power must be > 0");

  const double sigma2 = link.noise_variance;
  const std::size_t d = link.n_streams;

  TransmitResult out;
  out.h_hat = decode_csi(cw);
  const Precoder prec_hat = svd_precoder(out.h_hat, d);   // transmitter side
  const Precoder prec_true = svd_precoder(ch.h, d);       // receiver side

  out.sent = encode_image(s, out.h_hat, sigma2, cfg);
  const std::size_t k = out.sent.symbols.size();
  const std::size_t n_blocks = (k + d - 1) / d;

  std::vector<std::vector<cd>> blocks(n_blocks, std::vector<cd>(d, cd{}));
  for (std::size_t i = 0; i < k; ++i) blocks[i / d][i % d] = out.sent.symbols[i];

  const double alpha = power_normalize(blocks, prec_hat.v, link.power);

  // effective channel seen after combining: U^H H V_hat
  const CMatrix g = (prec_true.u.adjoint() * ch.h) * prec_hat.v;
  const double lambda = sigma2 > 0.0
                            ? sigma2 * static_cast<double>(d) / link.power
                            : 0.0;

  SymbolVector received;
  received.bandwidth_ratio = out.sent.bandwidth_ratio;
  received.power_scale = out.sent.power_scale;
  received.symbols.resize(k);
  const double inv_alpha = alpha != 0.0 ? 1.0 / alpha : 0.0;
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const auto y = transmit(blocks[j], prec_hat.v, ch, sigma2, rng);
    const auto r = combine(y, prec_true.u);
    const auto xh = equalize(g, lambda, r);
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t idx = j * d + i;
      if (idx < k) received.symbols[idx] = xh[i] * inv_alpha;
    }
  }

  out.s_hat = decode_image(received, out.h_hat, sigma2, cfg, s.width, s.height, s.channels);
  out.psnr_db = psnr(s, out.s_hat, 1.0, &out.psnr_exact);
  return out;
}

}  // namespace scan
