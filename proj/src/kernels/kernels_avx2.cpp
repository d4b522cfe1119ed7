// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2;
// callers reach it through the dispatch table after a cpuid check.

#include <immintrin.h>

#include "scan/kernels/kernels.hpp"

namespace scan::kern::avx2 {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    _mm256_storeu_pd(y + i, y0);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void scale(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void caxpy(cd a, const cd* x, cd* y, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const __m256d var = _mm256_set1_pd(a.real());
  const __m256d vai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  // two complex values per vector: [xr0 xi0 xr1 xi1]
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(xs + 2 * i);
    const __m256d vxs = _mm256_permute_pd(vx, 0x5);  // [xi0 xr0 xi1 xr1]
    const __m256d t = _mm256_mul_pd(vai, vxs);
    // fmaddsub: even lanes ar*xr - ai*xi, odd lanes ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(var, vx, t);
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += a.real() * xr - a.imag() * xi;
    ys[2 * i + 1] += a.real() * xi + a.imag() * xr;
  }
}

cd cdot(const cd* x, const cd* y, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  const double* ys = reinterpret_cast<const double*>(y);
  __m256d racc = _mm256_setzero_pd();  // pairs xr*yr, xi*yi
  __m256d iacc = _mm256_setzero_pd();  // pairs xr*yi, xi*yr
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(xs + 2 * i);
    const __m256d vy = _mm256_loadu_pd(ys + 2 * i);
    const __m256d vys = _mm256_permute_pd(vy, 0x5);
    racc = _mm256_fmadd_pd(vx, vy, racc);
    iacc = _mm256_fmadd_pd(vx, vys, iacc);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, racc);
  _mm256_store_pd(m, iacc);
  double re = (r[0] + r[2]) + (r[1] + r[3]);
  double im = (m[0] + m[2]) - (m[1] + m[3]);
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double csum_sq(const cd* x, std::size_t n) {
  return sum_sq(reinterpret_cast<const double*>(x), 2 * n);
}

}  // namespace scan::kern::avx2
