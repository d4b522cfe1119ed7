// SPDX-License-Identifier: Apache-2.0
//
// scan-sim: runtime-dispatched arithmetic kernels.
//
// Every hot inner loop in the library (sparse recovery, transform coding,
// dense layers, complex matrix products) funnels through this small set of
// primitives. A scalar reference implementation always exists; an AVX2
// variant is selected at startup when the CPU supports it. The environment
// variable SCAN_KERNELS={auto,scalar,avx2} overrides the selection.

#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace scan::kern {

using cd = std::complex<double>;

/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

/// sum_i x[i]^2
double sum_sq(const double* x, std::size_t n);

/// x[i] *= a
void scale(double a, double* x, std::size_t n);

/// y[i] += a * x[i], complex
void caxpy(cd a, const cd* x, cd* y, std::size_t n);

/// sum_i conj(x[i]) * y[i]
cd cdot(const cd* x, const cd* y, std::size_t n);

/// sum_i |x[i]|^2
double csum_sq(const cd* x, std::size_t n);

/// Name of the backend serving the calls above ("scalar" or "avx2").
const std::string& active_backend();

/// True when the AVX2 translation unit was compiled in.
bool avx2_compiled();

/// True when the running CPU reports AVX2+FMA.
bool avx2_supported();

// Reference implementations, always available. The dispatched entry points
// above must agree with these within floating-point reassociation error;
// tests/test_kernels.cpp enforces that equivalence.
namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void scale(double a, double* x, std::size_t n);
void caxpy(cd a, const cd* x, cd* y, std::size_t n);
cd cdot(const cd* x, const cd* y, std::size_t n);
double csum_sq(const cd* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Present only when avx2_compiled(); call only when avx2_supported().
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void scale(double a, double* x, std::size_t n);
void caxpy(cd a, const cd* x, cd* y, std::size_t n);
cd cdot(const cd* x, const cd* y, std::size_t n);
double csum_sq(const cd* x, std::size_t n);
}  // namespace avx2

}  // namespace scan::kern
