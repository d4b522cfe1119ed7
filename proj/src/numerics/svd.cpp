// SPDX-License-Identifier: Apache-2.0

#include "scan/numerics/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan {

namespace {

// Orthogonalize the columns of W (m x n, m >= n, column vectors) by plane
// rotations, accumulating them into the columns of V (n x n).
void jacobi_sweeps(std::vector<std::vector<cd>>& w, std::vector<std::vector<cd>>& v) {
  const std::size_t n = w.size();
  constexpr double kOffTol = 1e-15;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = kern::csum_sq(w[p].data(), w[p].size());
        const double aqq = kern::csum_sq(w[q].data(), w[q].size());
        if (app == 0.0 || aqq == 0.0) continue;
        const cd apq = kern::cdot(w[p].data(), w[q].data(), w[p].size());
        const double g = std::abs(apq);
        if (g <= kOffTol * std::sqrt(app * aqq)) continue;

        const cd alpha = apq / g;  // unit phase of the coupling term
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cd sc = s * std::conj(alpha);   // applied to column q in the p-update
        const cd cc = c * std::conj(alpha);

        auto rotate = [&](std::vector<cd>& colp, std::vector<cd>& colq) {
          for (std::size_t i = 0; i < colp.size(); ++i) {
            const cd xp = colp[i], xq = colq[i];
            colp[i] = c * xp - sc * xq;
            colq[i] = s * xp + cc * xq;
          }
        };
        rotate(w[p], w[q]);
        rotate(v[p], v[q]);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
}

SvdResult svd_tall(const CMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<cd>> w(n, std::vector<cd>(m));
  std::vector<std::vector<cd>> v(n, std::vector<cd>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }

  jacobi_sweeps(w, v);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(kern::csum_sq(w[j].data(), m));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
  // Columns with any nonzero norm are safe to normalize directly: the sweep
  // tolerance is relative to the column norms, so W_p^H W_q / (s_p s_q)
  // stays at rounding level however small s_p, s_q are.
  const double zero_tol = sig_max * 1e-250;

  SvdResult r;
  r.u = CMatrix(m, n);
  r.v = CMatrix(n, n);
  r.sigma.resize(n);

  std::vector<std::vector<cd>> ucols(n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t src = order[jj];
    r.sigma[jj] = sigma[src];
    if (sigma[src] > zero_tol) {
      ucols[jj] = w[src];
      const double inv = 1.0 / sigma[src];
      for (auto& x : ucols[jj]) x *= inv;
    }
  }
  // fill null-space U columns by Gram-Schmidt over canonical basis vectors,
  // two orthogonalization passes for stability
  const double accept_tol = std::sqrt(0.25 / static_cast<double>(m));
  std::size_t cand = 0;
  for (std::size_t jj = 0; jj < n; ++jj) {
    if (!ucols[jj].empty()) continue;
    r.sigma[jj] = 0.0;
    while (cand < m) {
      std::vector<cd> u(m);
      u[cand] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < n; ++k) {
          if (ucols[k].empty()) continue;
          const cd proj = kern::cdot(ucols[k].data(), u.data(), m);
          kern::caxpy(-proj, ucols[k].data(), u.data(), m);
        }
      }
      const double norm = std::sqrt(kern::csum_sq(u.data(), m));
      ++cand;
      if (norm > accept_tol) {
        for (auto& x : u) x /= norm;
        ucols[jj] = std::move(u);
        break;
      }
    }
    if (ucols[jj].empty())
      throw std::runtime_error("svd: failed to complete orthonormal basis");
  }

  for (std::size_t jj = 0; jj < n; ++jj) {
    for (std::size_t i = 0; i < m; ++i) r.u(i, jj) = ucols[jj][i];
    for (std::size_t i = 0; i < n; ++i) r.v(i, jj) = v[order[jj]][i];
  }
  return r;
}

void apply_phase_convention(SvdResult& r) {
  const std::size_t k = r.sigma.size();
  for (std::size_t j = 0; j < k; ++j) {
    cd pivot{};
    for (std::size_t i = 0; i < r.v.rows(); ++i) {
      if (std::abs(r.v(i, j)) > 1e-12) {
        pivot = r.v(i, j);
        break;
      }
    }
    if (pivot == cd{}) continue;
    const cd ph = std::conj(pivot / std::abs(pivot));
    for (std::size_t i = 0; i < r.v.rows(); ++i) r.v(i, j) *= ph;
    for (std::size_t i = 0; i < r.u.rows(); ++i) r.u(i, j) *= ph;
  }
}

}  // namespace

SvdResult svd(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("svd: input has non-finite entries");

  SvdResult r;
  if (a.rows() >= a.cols()) {
    r = svd_tall(a);
  } else {
    SvdResult t = svd_tall(a.adjoint());
    r.u = std::move(t.v);
    r.v = std::move(t.u);
    r.sigma = std::move(t.sigma);
  }
  apply_phase_convention(r);
  return r;
}

CMatrix compose_svd(const SvdResult& r) {
  const std::size_t k = r.sigma.size();
  CMatrix us = r.u;  // scale columns by sigma, then multiply by V^H
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) us(i, j) *= r.sigma[j];
  return us * r.v.adjoint();
}

}  // namespace scan
