#include <cmath>

#include "kernels_impl.hpp"

namespace duhamel::simd::scalar {
namespace {

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(const double* a, const double* b, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i]));
  return m;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable t{multiply, multiply_add, axpy, dot, max_abs};
  return t;
}

}  // namespace duhamel::simd::scalar
