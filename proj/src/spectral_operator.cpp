#include "duhamel/spectral_operator.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "duhamel/simd.hpp"

namespace duhamel {

ModeVector& ModeVector::operator+=(const ModeVector& o) {
  if (o.size() != size()) throw std::invalid_argument("ModeVector size mismatch");
  simd::axpy(1.0, o.span(), span());
  return *this;
}

ModeVector& ModeVector::operator-=(const ModeVector& o) {
  if (o.size() != size()) throw std::invalid_argument("ModeVector size mismatch");
  simd::axpy(-1.0, o.span(), span());
  return *this;
}

ModeVector& ModeVector::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

double ModeVector::max_abs() const { return simd::max_abs(span()); }

ModeVector operator+(ModeVector a, const ModeVector& b) { return a += b; }
ModeVector operator-(ModeVector a, const ModeVector& b) { return a -= b; }
ModeVector operator*(double s, ModeVector a) { return a *= s; }

EigenBasis::EigenBasis(Spec spec)
    : mu_(std::move(spec.eigenvalues)),
      trace_(std::move(spec.boundary_trace)),
      lift_(std::move(spec.lift_coefficients)),
      eigenfunction_(std::move(spec.eigenfunction)),
      lift_profile_(std::move(spec.lift_profile)),
      lift_profile_derivative_(std::move(spec.lift_profile_derivative)),
      tail_(std::move(spec.flux_kernel_tail)),
      eigenvalue_formula_(std::move(spec.eigenvalue_formula)),
      name_(std::move(spec.name)) {
  if (mu_.empty()) throw std::invalid_argument("eigenbasis needs at least one mode");
  if (trace_.size() != mu_.size() || lift_.size() != mu_.size()) {
    throw std::invalid_argument("eigenbasis arrays differ in length");
  }
  for (std::size_t n = 0; n < mu_.size(); ++n) {
    if (!(mu_[n] > 0.0)) throw std::invalid_argument("eigenvalues must be positive");
    if (n > 0 && !(mu_[n] > mu_[n - 1])) throw std::invalid_argument("eigenvalues must increase strictly");
  }
  if (!eigenfunction_) throw std::invalid_argument("eigenbasis needs an eigenfunction evaluator");
  if (!tail_) {
    tail_ = [](std::size_t) { return std::numeric_limits<double>::quiet_NaN(); };
  }
  flux_gain_.resize(mu_.size());
  for (std::size_t n = 0; n < mu_.size(); ++n) flux_gain_[n] = mu_[n] * lift_[n];
}

EigenBasis EigenBasis::heat_robin(std::size_t modes) {
  if (modes < 1) throw std::invalid_argument("heat basis needs at least one mode");
  Spec spec;
  spec.eigenvalues.resize(modes);
  spec.boundary_trace.resize(modes);
  spec.lift_coefficients.resize(modes);
  for (std::size_t i = 0; i < modes; ++i) {
    const double freq = std::numbers::pi * (2.0 * (i + 1) - 1.0) / 2.0;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^{n+1}, n = i + 1
    spec.eigenvalues[i] = freq * freq;
    spec.boundary_trace[i] = sign;
    spec.lift_coefficients[i] = 2.0 * sign / (freq * freq);
  }
  spec.eigenvalue_formula = [](std::size_t i) {
    const double freq = std::numbers::pi * (2.0 * (i + 1) - 1.0) / 2.0;
    return freq * freq;
  };
  spec.eigenfunction = [](std::size_t i, double x) {
    return std::sin(std::numbers::pi * (2.0 * (i + 1) - 1.0) / 2.0 * x);
  };
  spec.lift_profile = [](double x) { return x; };
  spec.lift_profile_derivative = [](double) { return 1.0; };
  // 2 sum_{n>M} 1/mu_n = 1 - (8/pi^2) sum_{n<=M} 1/(2n-1)^2
  spec.flux_kernel_tail = [](std::size_t m) {
    double partial = 0.0;
    for (std::size_t n = m; n-- > 0;) {
      const double odd = 2.0 * (n + 1) - 1.0;
      partial += 1.0 / (odd * odd);
    }
    return std::max(0.0, 1.0 - 8.0 / (std::numbers::pi * std::numbers::pi) * partial);
  };
  spec.name = "heat_robin";
  return EigenBasis(std::move(spec));
}

double EigenBasis::eigenvalue_beyond(std::size_t n) const {
  if (n < size()) return mu_[n];
  if (!eigenvalue_formula_) return std::numeric_limits<double>::quiet_NaN();
  return eigenvalue_formula_(n);
}

std::vector<double> EigenBasis::eigenfunctions_at(double x) const {
  std::vector<double> out(size());
  for (std::size_t n = 0; n < size(); ++n) out[n] = eigenfunction_(n, x);
  return out;
}

double EigenBasis::trace(const ModeVector& v) const {
  if (v.size() != size()) throw std::invalid_argument("trace: mode count mismatch");
  return simd::dot(trace_, v.span());
}

double EigenBasis::evaluate(const ModeVector& v, double x) const {
  if (v.size() != size()) throw std::invalid_argument("evaluate: mode count mismatch");
  auto phi = eigenfunctions_at(x);
  return simd::dot(phi, v.span());
}

ModeVector EigenBasis::project(const std::function<double(double)>& u0, double tol) const {
  using boost::math::quadrature::gauss_kronrod;
  ModeVector out(size());
  for (std::size_t n = 0; n < size(); ++n) {
    auto integrand = [&](double x) { return u0(x) * eigenfunction_(n, x); };
    // Split into pieces no longer than a half-period so each panel is smooth;
    // shallow depth because the error estimate stalls at roundoff on small results.
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::sqrt(mu_[n]) / std::numbers::pi)));
    double sum = 0.0;
    for (int p = 0; p < pieces; ++p) {
      sum += gauss_kronrod<double, 31>::integrate(integrand, double(p) / pieces, double(p + 1) / pieces,
                                                   5, tol);
    }
    out[n] = 2.0 * sum;
  }
  return out;
}

OperatorFamily::OperatorFamily(EigenBasis basis, Polynomial a, Polynomial c)
    : basis_(std::move(basis)), a_(std::move(a)), c_(std::move(c)) {}

ModeVector OperatorFamily::frozen_eigenvalues(double t) const {
  ModeVector out(size());
  const double at = a_(t), ct = c_(t);
  for (std::size_t n = 0; n < size(); ++n) out[n] = at * basis_.eigenvalue(n) + ct;
  return out;
}

ModeVector apply_exponential(const OperatorFamily& family, double frozen_time, const ModeVector& v,
                             double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("apply_exponential: lambda must be >= 0");
  if (v.size() != family.size()) throw std::invalid_argument("apply_exponential: mode count mismatch");
  ModeVector factors = family.frozen_eigenvalues(frozen_time);
  for (double& f : factors) f = std::exp(-lambda * f);
  ModeVector out(v.size());
  simd::multiply(factors.span(), v.span(), out.span());
  return out;
}

ModeVector apply_fractional_power(const OperatorFamily& family, double frozen_time,
                                  const ModeVector& v, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("apply_fractional_power: gamma must be >= 0");
  if (v.size() != family.size()) throw std::invalid_argument("apply_fractional_power: mode count mismatch");
  ModeVector factors = family.frozen_eigenvalues(frozen_time);
  for (double& f : factors) f = gamma == 0.0 ? 1.0 : (gamma == 1.0 ? f : std::pow(f, gamma));
  ModeVector out(v.size());
  simd::multiply(factors.span(), v.span(), out.span());
  return out;
}

ModeVector lift(const EigenBasis& basis, double y) {
  ModeVector out(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) out[n] = basis.lift_coefficients()[n] * y;
  return out;
}

AssumptionReport verify_assumptions(const OperatorFamily& family, double final_time, int samples,
                                    const ExpPoly& boundary_multiplier, double gamma, double beta) {
  AssumptionReport r;
  samples = std::max(samples, 2);
  r.samples = samples;
  r.omega = std::numeric_limits<double>::infinity();
  bool a_positive = true;
  std::vector<double> ts(samples);
  for (int i = 0; i < samples; ++i) ts[i] = final_time * i / (samples - 1);

  for (double t : ts) {
    if (!(family.a()(t) > 0.0)) a_positive = false;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < family.size(); ++n) smallest = std::min(smallest, family.eigenvalue(n, t));
    r.omega = std::min(r.omega, smallest);
    const double bt = std::fabs(boundary_multiplier(t));
    if (bt > r.boundary_multiplier_max) {
      r.boundary_multiplier_max = bt;
      r.boundary_multiplier_argmax = t;
    }
  }
  r.strongly_positive = a_positive && r.omega > 0.0;
  if (!a_positive) r.violations.push_back("a(t) <= 0 at some sample");
  if (!(r.omega > 0.0)) r.violations.push_back("frozen operator not positive (omega <= 0)");

  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      if (i == j) continue;
      const double t = ts[i], s = ts[j], dt = std::fabs(t - s);
      double b3 = 0.0, b4 = 0.0;
      for (std::size_t n = 0; n < family.size(); ++n) {
        const double lt = family.eigenvalue(n, t), ls = family.eigenvalue(n, s);
        if (lt <= 0.0 || ls <= 0.0) continue;
        b3 = std::max(b3, std::fabs(lt - ls) / std::pow(lt, gamma));
        b4 = std::max(b4, std::fabs(std::pow(lt / ls, beta) - 1.0));
      }
      r.lipschitz_b3 = std::max(r.lipschitz_b3, b3 / dt);
      r.lipschitz_b4 = std::max(r.lipschitz_b4, b4 / dt);
    }
  }
  return r;
}

}  // namespace duhamel
