#include <arm_neon.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace duhamel::simd::neon {
namespace {

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(const double* a, const double* b, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) acc[i] = std::fma(a[i], b[i], acc[i]);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t s = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) s = vfmaq_f64(s, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
  for (; i < n; ++i) r = std::fma(a[i], b[i], r);
  return r;
}

double max_abs(const double* a, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(a + i)));
  double r = std::fmax(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(a[i]));
  return r;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable t{multiply, multiply_add, axpy, dot, max_abs};
  return t;
}

}  // namespace duhamel::simd::neon
