// SPDX-License-Identifier: Apache-2.0
//
// Multi-rate CSI feedback: beamspace (angular-domain) sparsification of the
// channel matrix, compression to a B-dimensional real codeword by a seeded
// random projection, and recovery by orthogonal matching pursuit. Encoder
// and decoder regenerate the identical projection matrix from (seed, B), so
// only the codeword travels on the feedback link.

#pragma once

#include <cstdint>
#include <vector>

#include "scan/numerics/cmatrix.hpp"

namespace scan {

struct BeamspaceCsi {
  CMatrix complex_form;          // H_tilde = F_r H F_l^H
  std::vector<double> real_form; // [vec(Re(H_tilde)), vec(Im(H_tilde))], row-major vec
};

struct CsiCodeword {
  uint32_t length = 0;  // B
  std::vector<double> values;
  uint64_t projection_seed = 0;
  uint32_t n_rx = 0;
  uint32_t n_tx = 0;
};

struct LengthSet {
  std::vector<int> values;  // strictly ascending, positive

  explicit LengthSet(std::vector<int> v);
  LengthSet() = default;
  int shortest() const { return values.front(); }
  int longest() const { return values.back(); }
  std::size_t levels() const { return values.size(); }
};

BeamspaceCsi to_beamspace(const CMatrix& h);
CMatrix from_beamspace(const BeamspaceCsi& b);

/// Reassemble the complex beamspace matrix from its stacked real form and
/// invert the DFTs.
CMatrix from_realform(const std::vector<double>& realform, std::size_t n_rx, std::size_t n_tx);

/// values = A_B * realform(to_beamspace(H)); A_B is B x (2 n_rx n_tx) with
/// i.i.d. N(0, 1/B) entries regenerated deterministically from (seed, B).
/// B == 2 n_rx n_tx uses the identity map. Throws std::invalid_argument for
/// B outside [1, 2 n_rx n_tx].
CsiCodeword encode_csi(const CMatrix& h, int b, uint64_t seed);

/// Sparse recovery of the beamspace coefficients by OMP with sparsity budget
/// max(1, B/4) (overridable), then inverse DFT. Identity mode is exact.
CMatrix decode_csi(const CsiCodeword& cw, int sparsity_override = -1);

/// Single-realization ||H - H_hat||_F^2 / ||H||_F^2.
double nmse(const CMatrix& h, const CMatrix& h_hat);

/// Wire format: 16-byte header (B, n_rx, n_tx, low 32 bits of seed; each a
/// little-endian u32) followed by B little-endian 64-bit reals.
std::vector<uint8_t> serialize_codeword(const CsiCodeword& cw);
CsiCodeword deserialize_codeword(const std::vector<uint8_t>& bytes);

/// Orthogonal matching pursuit on z = A x with A row-major (rows x cols).
/// Selects up to `sparsity` columns by normalized correlation and returns the
/// least-squares solution on the chosen support.
std::vector<double> omp_recover(const std::vector<double>& a, std::size_t rows,
                                std::size_t cols, const std::vector<double>& z,
                                std::size_t sparsity);

}  // namespace scan
