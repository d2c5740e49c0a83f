#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Mode-vector kernels used in the inner loops of assembly and stage solves.
// Every kernel has a scalar reference; vector variants are picked at runtime
// from what the CPU reports and can be overridden for testing.
namespace duhamel::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  // acc[i] += a[i] * b[i]
  void (*multiply_add)(const double* a, const double* b, double* acc, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
};

const KernelTable& table(Isa isa);
bool available(Isa isa);

Isa active_isa();
// Throws std::invalid_argument when the requested ISA is not available.
void set_active_isa(Isa isa);
std::string_view name(Isa isa);
Isa parse_isa(std::string_view text);

const KernelTable& active();

inline void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().multiply(a.data(), b.data(), out.data(), out.size());
}
inline void multiply_add(std::span<const double> a, std::span<const double> b,
                         std::span<double> acc) {
  active().multiply_add(a.data(), b.data(), acc.data(), acc.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double max_abs(std::span<const double> a) { return active().max_abs(a.data(), a.size()); }

}  // namespace duhamel::simd
