// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>

#include "scan/csi/csi.hpp"
#include "scan/numerics/dft.hpp"

namespace scan {

namespace {

std::vector<double> stack_realform(const CMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = m.data()[i].real();
    out[n + i] = m.data()[i].imag();
  }
  return out;
}

}  // namespace

BeamspaceCsi to_beamspace(const CMatrix& h) {
  if (!h.all_finite()) throw std::invalid_argument("to_beamspace: non-finite input");
  const CMatrix& fr = unitary_dft_cached(h.rows());
  const CMatrix& fl = unitary_dft_cached(h.cols());
  BeamspaceCsi b;
  b.complex_form = fr * h * fl.adjoint();
  b.real_form = stack_realform(b.complex_form);
  return b;
}

CMatrix from_beamspace(const BeamspaceCsi& b) {
  const CMatrix& fr = unitary_dft_cached(b.complex_form.rows());
  const CMatrix& fl = unitary_dft_cached(b.complex_form.cols());
  return fr.adjoint() * b.complex_form * fl;
}

CMatrix from_realform(const std::vector<double>& realform, std::size_t n_rx, std::size_t n_tx) {
  const std::size_t n = n_rx * n_tx;
  if (realform.size() != 2 * n)
    throw std::invalid_argument("from_realform: length must be 2*n_rx*n_tx");
  BeamspaceCsi b;
  b.complex_form = CMatrix(n_rx, n_tx);
  for (std::size_t i = 0; i < n; ++i) b.complex_form.data()[i] = cd{realform[i], realform[n + i]};
  b.real_form = realform;
  return from_beamspace(b);
}

}  // namespace scan
