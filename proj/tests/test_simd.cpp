#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>
#include <vector>

#include "duhamel/simd.hpp"

using namespace duhamel;

namespace {

std::vector<simd::Isa> available_vector_isas() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (simd::available(isa)) out.push_back(isa);
  }
  return out;
}

struct RestoreIsa {
  simd::Isa saved = simd::active_isa();
  ~RestoreIsa() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(simd::available(simd::Isa::kScalar));
  CHECK(simd::parse_isa("scalar") == simd::Isa::kScalar);
  CHECK(simd::name(simd::Isa::kAvx2) == "avx2");
  RestoreIsa restore;
  simd::set_active_isa(simd::Isa::kScalar);
  CHECK(simd::active_isa() == simd::Isa::kScalar);
  for (auto isa : {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::available(isa)) CHECK_THROWS_AS(simd::set_active_isa(isa), std::invalid_argument);
  }
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto& ref = simd::table(simd::Isa::kScalar);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (auto isa : available_vector_isas()) {
    const auto& vec = simd::table(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      std::vector<double> a(n), b(n), acc(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
        acc[i] = u(rng);
      }
      std::vector<double> o1(n), o2(n);
      ref.multiply(a.data(), b.data(), o1.data(), n);
      vec.multiply(a.data(), b.data(), o2.data(), n);
      CHECK(o1 == o2);

      auto r1 = acc, r2 = acc;
      ref.multiply_add(a.data(), b.data(), r1.data(), n);
      vec.multiply_add(a.data(), b.data(), r2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(r1[i] - r2[i]) <= 2 * eps * (std::fabs(acc[i]) + std::fabs(a[i] * b[i])));

      r1 = acc;
      r2 = acc;
      ref.axpy(0.37, a.data(), r1.data(), n);
      vec.axpy(0.37, a.data(), r2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(r1[i] - r2[i]) <= 2 * eps * (std::fabs(acc[i]) + std::fabs(0.37 * a[i])));

      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) mass += std::fabs(a[i] * b[i]);
      CHECK(std::fabs(ref.dot(a.data(), b.data(), n) - vec.dot(a.data(), b.data(), n)) <= 4 * n * eps * mass + 1e-300);
      CHECK(ref.max_abs(a.data(), n) == vec.max_abs(a.data(), n));
    }
  }
}
