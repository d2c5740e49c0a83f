#include "duhamel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "duhamel/simd.hpp"

namespace duhamel {

namespace {

constexpr int kSeriesMaxTerms = 2000;

// e^{-z} sum_k z^k / (k! (m + k + 1)), z >= 0; every term positive.
double unit_moment_series_pos(double z, int m) {
  double power = 1.0;  // z^k / k!
  double sum = 0.0;
  for (int k = 0; k < kSeriesMaxTerms; ++k) {
    const double term = power / (m + k + 1);
    sum += term;
    if (term <= 1e-17 * sum && k > z) break;
    power *= z / (k + 1);
  }
  return std::exp(-z) * sum;
}

// sum_k |z|^k m! / (m + k + 1)!, z < 0.
double unit_moment_series_neg(double z, int m) {
  const double a = -z;
  double term = 1.0 / (m + 1);
  double sum = 0.0;
  for (int k = 0; k < kSeriesMaxTerms; ++k) {
    sum += term;
    if (term <= 1e-17 * sum && k > a) break;
    term *= a / (m + k + 2);
  }
  return sum;
}

}  // namespace

std::vector<double> unit_moments(double z, int m_max) {
  if (m_max < 0) throw std::invalid_argument("unit_moments: m_max must be >= 0");
  std::vector<double> j(m_max + 1);
  if (z >= std::max(2.0 * m_max, 4.0)) {
    j[0] = -std::expm1(-z) / z;
    for (int m = 1; m <= m_max; ++m) j[m] = (1.0 - m * j[m - 1]) / z;
    return j;
  }
  for (int m = 0; m <= m_max; ++m) {
    j[m] = z >= 0.0 ? unit_moment_series_pos(z, m) : unit_moment_series_neg(z, m);
  }
  return j;
}

double i0_taylor(double mu, double h) {
  const double x = mu * h;
  return h * (1.0 - x / 2.0 * (1.0 - x / 3.0 * (1.0 - x / 4.0)));
}

double i0_closed_form(double mu, double h) { return -std::expm1(-mu * h) / mu; }

MomentTable moment_integrals(double mu, double lo, double hi, int s_max) {
  if (!(mu > 0.0)) throw std::invalid_argument("moment_integrals: mu must be > 0");
  if (!(hi > lo)) throw std::invalid_argument("moment_integrals: need hi > lo");
  if (s_max < 0) throw std::invalid_argument("moment_integrals: s_max must be >= 0");
  MomentTable t{mu, lo, hi, s_max, std::vector<double>(s_max + 1)};
  const double h = hi - lo;
  const double x = mu * h;
  auto& v = t.values;

  if (x >= s_max + 1.0 && lo >= 0.0) {
    const double decay = std::exp(-x);
    v[0] = i0_closed_form(mu, h);
    double hi_pow = 1.0, lo_pow = 1.0;
    for (int s = 1; s <= s_max; ++s) {
      hi_pow *= hi;
      lo_pow *= lo;
      v[s] = (hi_pow - lo_pow * decay - s * v[s - 1]) / mu;
    }
  } else {
    // lambda = lo + h u: I_s = sum_i C(s, i) lo^{s-i} h^{i+1} J_i(mu h)
    const auto j = unit_moments(x, s_max);
    for (int s = 0; s <= s_max; ++s) {
      double sum = 0.0;
      double binom = 1.0;
      for (int i = 0; i <= s; ++i) {
        sum += binom * std::pow(lo, s - i) * std::pow(h, i + 1) * j[i];
        binom = binom * (s - i) / (i + 1);
      }
      v[s] = sum;
    }
    if (x < kI0TaylorThreshold) v[0] = i0_taylor(mu, h);
  }
  for (double val : v) {
    if (!std::isfinite(val)) throw std::runtime_error("moment_integrals: non-finite moment");
  }
  return t;
}

KernelSeries::KernelSeries(EigenBasis basis) : basis_(std::move(basis)) {}

double KernelSeries::K(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel K: t must be > 0");
  double sum = 0.0;
  const auto mu = basis_.eigenvalues();
  const auto gain = basis_.flux_gain();
  const auto tr = basis_.boundary_trace();
  for (std::size_t n = 0; n < size(); ++n) sum += gain[n] * tr[n] * std::exp(-mu[n] * t);
  return sum;
}

double KernelSeries::K1(double t, double x) const {
  if (!(t > 0.0)) throw std::invalid_argument("kernel K1: t must be > 0");
  double sum = 0.0;
  const auto mu = basis_.eigenvalues();
  const auto gain = basis_.flux_gain();
  for (std::size_t n = 0; n < size(); ++n) {
    sum += gain[n] * basis_.eigenfunction(n, x) * std::exp(-mu[n] * t);
  }
  return sum;
}

double KernelSeries::homogeneous_v(const ModeVector& u0, double x, double t) const {
  if (u0.size() != size()) throw std::invalid_argument("homogeneous_v: mode count mismatch");
  std::vector<double> w(size());
  const auto mu = basis_.eigenvalues();
  for (std::size_t n = 0; n < size(); ++n) w[n] = std::exp(-mu[n] * t) * basis_.eigenfunction(n, x);
  return simd::dot(w, u0.span());
}

double KernelSeries::off_coincidence_bound(double delta, double kernel_weight) const {
  if (!(delta > 0.0)) throw std::invalid_argument("off_coincidence_bound: delta must be > 0");
  const double m1 = basis_.eigenvalue_beyond(size());
  const double m2 = basis_.eigenvalue_beyond(size() + 1);
  if (std::isnan(m1) || std::isnan(m2)) return std::numeric_limits<double>::quiet_NaN();
  return kernel_weight * std::exp(-m1 * delta) / (-std::expm1(-(m2 - m1) * delta));
}

}  // namespace duhamel
