#pragma once

#include <vector>

#include "duhamel/spectral_operator.hpp"

namespace duhamel {

/// Below this value of mu * (hi - lo), I_0 switches to its Taylor expansion.
inline constexpr double kI0TaylorThreshold = 1e-6;

/// J_m(z) = int_0^1 exp(-z (1 - u)) u^m du for m = 0..m_max and any real z.
/// Forward recurrence for large z, positive power series otherwise.
std::vector<double> unit_moments(double z, int m_max);

struct MomentTable {
  double mu = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int s_max = 0;
  std::vector<double> values;  // I_0..I_{s_max}
};

/// I_s = int_lo^hi exp(-mu (hi - lambda)) lambda^s d lambda, s = 0..s_max.
/// Throws std::invalid_argument for mu <= 0, hi <= lo or s_max < 0.
MomentTable moment_integrals(double mu, double lo, double hi, int s_max);

/// (1 - exp(-mu h)) / mu by the 4-term Taylor series in mu h.
double i0_taylor(double mu, double h);
/// (1 - exp(-mu h)) / mu via expm1.
double i0_closed_form(double mu, double h);

/// Truncated heat-kernel series on an eigenbasis:
///   K(t)     = sum_n mu_n b_n phi_n(1) exp(-mu_n t)
///   K1(t, x) = sum_n mu_n b_n phi_n(x) exp(-mu_n t)
/// so that a boundary flux h contributes int K1(t - l, x) h(l) dl to u(x, t).
class KernelSeries {
 public:
  explicit KernelSeries(EigenBasis basis);

  const EigenBasis& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }

  /// Throws std::invalid_argument for t <= 0.
  double K(double t) const;
  double K1(double t, double x) const;

  /// sum_n u0_n exp(-mu_n t) phi_n(x).
  double homogeneous_v(const ModeVector& u0, double x, double t) const;

  /// Omitted integrated mass sum_{n>M} mu_n b_n phi_n(1) / mu_n. Bounds the
  /// truncation error of int_0^t K(t - l) h(l) dl by sup|h| times this value.
  double tail_bound() const { return basis_.integrated_tail(); }

  /// Pointwise bound on the omitted terms of K at lag delta > 0, assuming
  /// |mu_n b_n phi_n| <= kernel_weight:
  ///   weight * exp(-mu_{M+1} delta) / (1 - exp(-(mu_{M+2} - mu_{M+1}) delta)).
  double off_coincidence_bound(double delta, double kernel_weight = 2.0) const;

 private:
  EigenBasis basis_;
};

}  // namespace duhamel
