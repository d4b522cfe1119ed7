// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "scan/kernels/kernels.hpp"

namespace scan::kern {

namespace {

struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*caxpy)(cd, const cd*, cd*, std::size_t);
  cd (*cdot)(const cd*, const cd*, std::size_t);
  double (*csum_sq)(const cd*, std::size_t);
  std::string name;
};

Table make_scalar() {
  return {scalar::axpy, scalar::dot, scalar::sum_sq, scalar::scale,
          scalar::caxpy, scalar::cdot, scalar::csum_sq, "scalar"};
}

#if SCAN_HAVE_AVX2_TU
Table make_avx2() {
  return {avx2::axpy, avx2::dot, avx2::sum_sq, avx2::scale,
          avx2::caxpy, avx2::cdot, avx2::csum_sq, "avx2"};
}
#endif

bool cpu_has_avx2() {
#if SCAN_HAVE_AVX2_TU && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Table select() {
  const char* env = std::getenv("SCAN_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return make_scalar();
#if SCAN_HAVE_AVX2_TU
  if (env != nullptr && std::strcmp(env, "avx2") == 0 && cpu_has_avx2())
    return make_avx2();
  if ((env == nullptr || std::strcmp(env, "auto") == 0) && cpu_has_avx2())
    return make_avx2();
#endif
  return make_scalar();
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

void axpy(double a, const double* x, double* y, std::size_t n) { table().axpy(a, x, y, n); }
double dot(const double* x, const double* y, std::size_t n) { return table().dot(x, y, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }
void scale(double a, double* x, std::size_t n) { table().scale(a, x, n); }
void caxpy(cd a, const cd* x, cd* y, std::size_t n) { table().caxpy(a, x, y, n); }
cd cdot(const cd* x, const cd* y, std::size_t n) { return table().cdot(x, y, n); }
double csum_sq(const cd* x, std::size_t n) { return table().csum_sq(x, n); }

const std::string& active_backend() { return table().name; }

bool avx2_compiled() {
#if SCAN_HAVE_AVX2_TU
  return true;
#else
  return false;
#endif
}

bool avx2_supported() { return cpu_has_avx2(); }

#if !SCAN_HAVE_AVX2_TU
// Stubs so callers can link unconditionally; guarded by avx2_compiled().
namespace avx2 {
namespace {
[[noreturn]] void unavailable() { throw std::logic_error("avx2 kernels not compiled in"); }
}  // namespace
void axpy(double, const double*, double*, std::size_t) { unavailable(); }
double dot(const double*, const double*, std::size_t) { unavailable(); }
double sum_sq(const double*, std::size_t) { unavailable(); }
void scale(double, double*, std::size_t) { unavailable(); }
void caxpy(cd, const cd*, cd*, std::size_t) { unavailable(); }
cd cdot(const cd*, const cd*, std::size_t) { unavailable(); }
double csum_sq(const cd*, std::size_t) { unavailable(); }
}  // namespace avx2
#endif

}  // namespace scan::kern
