#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

#include "duhamel/kernels.hpp"
#include "oracle.hpp"

using namespace duhamel;

namespace {

constexpr double kPi = std::numbers::pi;

double quad_moment(double mu, double lo, double hi, int s) {
  auto f = [=](double l) { return std::exp(-mu * (hi - l)) * std::pow(l, s); };
  return oracle::integrate(f, lo, hi, mu);
}

}  // namespace

TEST_CASE("K(t): decay, value at t = 1, monotonicity, domain") {
  const KernelSeries ks(EigenBasis::heat_robin(200));
  CHECK(ks.K(10.0) < 1e-10);
  long double ref = 0.0L;
  for (int n = 1; n <= 40; ++n) {
    const long double w = 3.14159265358979323846L * (2 * n - 1) / 2;
    ref += 2.0L * std::exp(-w * w);
  }
  CHECK(ks.K(1.0) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
  CHECK(ks.K(1.0) == doctest::Approx(0.1696098).epsilon(1e-6));
  double prev = ks.K(0.01);
  for (double t = 0.02; t < 3.0; t += 0.01) {
    const double k = ks.K(t);
    CHECK(k < prev);
    CHECK(k >= 0.0);
    prev = k;
  }
  CHECK_THROWS_AS(ks.K(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ks.K1(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("K1(t, 1) = K(t), K1(t, 0) = 0, truncation stability") {
  const KernelSeries ks(EigenBasis::heat_robin(200));
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(std::fabs(ks.K1(t, 1.0) - ks.K(t)) < 1e-12);
    CHECK(ks.K1(t, 0.0) == 0.0);
  }
  const KernelSeries k50(EigenBasis::heat_robin(50));
  CHECK(std::fabs(k50.K1(1.0, 0.5) - ks.K1(1.0, 0.5)) < 1e-20);
}

TEST_CASE("homogeneous solution series") {
  const KernelSeries ks(EigenBasis::heat_robin(40));
  const ModeVector e1 = ModeVector::unit(40, 0);
  CHECK(ks.homogeneous_v(e1, 0.5, 1.0) == doctest::Approx(std::exp(-kPi * kPi / 4) * std::sin(kPi / 4)).epsilon(1e-14));
  CHECK(ks.homogeneous_v(e1, 0.5, 1.0) == doctest::Approx(0.0599660).epsilon(1e-6));
  ModeVector u0(40);
  for (std::size_t n = 0; n < 40; ++n) u0[n] = 1.0 / (1.0 + n * n);
  CHECK(ks.homogeneous_v(u0, 0.3, 0.0) == ks.basis().evaluate(u0, 0.3));
  const ModeVector e2 = ModeVector::unit(40, 1);
  const double r = ks.homogeneous_v(e2, 0.4, 0.2) / ks.homogeneous_v(e2, 0.4, 0.1);
  CHECK(r == doctest::Approx(std::exp(-9 * kPi * kPi / 4 * 0.1)).epsilon(1e-13));
}

TEST_CASE("moment integrals: closed-form values and edge regimes") {
  CHECK(moment_integrals(1.0, 0.0, 1.0, 0).values[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(moment_integrals(1.0, 0.0, 1.0, 0).values[0] == doctest::Approx(0.6321205).epsilon(1e-7));
  CHECK(moment_integrals(1e-8, 0.0, 1.0, 0).values[0] == doctest::Approx(1.0).epsilon(1e-7));
  const auto t = moment_integrals(kPi * kPi / 4, 0.25, 0.75, 3);
  CHECK(std::fabs(t.values[3] - quad_moment(kPi * kPi / 4, 0.25, 0.75, 3)) < 1e-11);
  CHECK_THROWS_AS(moment_integrals(0.0, 0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(moment_integrals(-1.0, 0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(moment_integrals(1.0, 1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("moment recurrence against quadrature on random tuples") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lmu(-3.0, 4.0), llo(-1.0, 2.0), len(0.01, 2.0);
  std::uniform_int_distribution<int> smax(0, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const double mu = std::pow(10.0, lmu(rng));
    const double lo = llo(rng), hi = lo + len(rng);
    const int s = smax(rng);
    const auto tab = moment_integrals(mu, lo, hi, s);
    for (int i = 0; i <= s; ++i) {
      const double q = quad_moment(mu, lo, hi, i);
      CHECK(std::fabs(tab.values[i] - q) <= 1e-10 * (1.0 + std::fabs(q)));
      if (lo >= 0.0) CHECK(tab.values[i] >= 0.0);
    }
  }
}

TEST_CASE("unit moments against quadrature over all branches") {
  for (double z : {-25.0, -3.0, -0.1, 0.0, 1e-9, 0.5, 5.0, 11.9, 12.0, 30.0, 100.0, 1e4}) {
    const auto j = unit_moments(z, 12);
    for (int m = 0; m <= 12; ++m) {
      auto f = [=](double u) { return std::exp(-z * (1.0 - u)) * std::pow(u, m); };
      const double q = oracle::integrate(f, 0.0, 1.0, z);
      CHECK(std::fabs(j[m] - q) <= 1e-12 * std::fabs(q));
    }
  }
}

TEST_CASE("I0 Taylor branch meets the closed form at the crossover") {
  for (double mu : {1e-3, 1.0, 250.0}) {
    const double h = kI0TaylorThreshold / mu;
    const double a = i0_taylor(mu, h), b = i0_closed_form(mu, h);
    CHECK(std::fabs(a - b) <= 1e-12 * std::fabs(b));
  }
}

TEST_CASE("integrated kernel converges with the tail bound") {
  const EigenBasis b200 = EigenBasis::heat_robin(200), b400 = EigenBasis::heat_robin(400);
  for (auto [lo, hi] : {std::pair{0.0, 0.3}, std::pair{0.25, 1.0}}) {
    double s200 = 0.0, s400 = 0.0;
    for (std::size_t n = 0; n < 400; ++n) {
      const double v = 2.0 * moment_integrals(b400.eigenvalue(n), lo, hi, 0).values[0];
      if (n < 200) s200 += v;
      s400 += v;
    }
    CHECK(std::fabs(s400 - s200) < b200.integrated_tail());
  }
}

TEST_CASE("off-coincidence bound dominates the omitted kernel terms") {
  const KernelSeries k40(EigenBasis::heat_robin(40)), k400(EigenBasis::heat_robin(400));
  for (double d : {1e-3, 1e-2, 0.1}) {
    const double omitted = k400.K(d) - k40.K(d);
    CHECK(omitted <= k40.off_coincidence_bound(d));
    CHECK(omitted >= 0.0);
  }
}
