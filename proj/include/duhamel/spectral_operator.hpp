#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "duhamel/time_function.hpp"

namespace duhamel {

/// Expansion coefficients of a field in the eigenbasis; u(x) = sum_n c_n phi_n(x).
class ModeVector {
 public:
  ModeVector() = default;
  explicit ModeVector(std::size_t modes, double value = 0.0) : c_(modes, value) {}
  explicit ModeVector(std::vector<double> coefficients) : c_(std::move(coefficients)) {}

  static ModeVector unit(std::size_t modes, std::size_t n) {
    ModeVector v(modes);
    v[n] = 1.0;
    return v;
  }

  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t n) { return c_[n]; }
  double operator[](std::size_t n) const { return c_[n]; }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }
  std::span<double> span() { return c_; }
  std::span<const double> span() const { return c_; }
  auto begin() { return c_.begin(); }
  auto end() { return c_.end(); }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  const std::vector<double>& coefficients() const { return c_; }

  ModeVector& operator+=(const ModeVector& o);
  ModeVector& operator-=(const ModeVector& o);
  ModeVector& operator*=(double s);
  bool operator==(const ModeVector&) const = default;

  double max_abs() const;

 private:
  std::vector<double> c_;
};

ModeVector operator+(ModeVector a, const ModeVector& b);
ModeVector operator-(ModeVector a, const ModeVector& b);
ModeVector operator*(double s, ModeVector a);

/// Spectral data of the base operator A0 with the homogeneous boundary
/// condition d1 u = 0 built into its domain, plus the lift B (A0 B y = 0,
/// d1 B y = y) and the boundary traces the Robin term needs.
class EigenBasis {
 public:
  using Eigenfunction = std::function<double(std::size_t n, double x)>;
  using Profile = std::function<double(double x)>;

  struct Spec {
    std::vector<double> eigenvalues;
    std::vector<double> boundary_trace;     // phi_n(1)
    std::vector<double> lift_coefficients;  // modes of B 1
    Eigenfunction eigenfunction;
    Profile lift_profile;                   // closed form of B 1
    Profile lift_profile_derivative;
    std::function<double(std::size_t)> flux_kernel_tail;  // sum_{n>M} mu_n b_n phi_n(1) / mu_n
    std::function<double(std::size_t)> eigenvalue_formula;  // mu for any 0-based index, optional
    std::string name = "custom";
  };

  explicit EigenBasis(Spec spec);

  /// -d^2/dx^2 on (0, 1) with u(0) = 0 and u'(1) = 0 in the domain:
  /// mu_n = (pi(2n-1)/2)^2, phi_n = sin(sqrt(mu_n) x), lift B y = y x.
  static EigenBasis heat_robin(std::size_t modes);

  std::size_t size() const { return mu_.size(); }
  const std::string& name() const { return name_; }
  std::span<const double> eigenvalues() const { return mu_; }
  double eigenvalue(std::size_t n) const { return mu_[n]; }
  std::span<const double> boundary_trace() const { return trace_; }
  std::span<const double> lift_coefficients() const { return lift_; }
  /// mu_n * b_n: weight of a unit boundary flux in mode n.
  std::span<const double> flux_gain() const { return flux_gain_; }

  double eigenfunction(std::size_t n, double x) const { return eigenfunction_(n, x); }
  /// phi_n(x) for every mode.
  std::vector<double> eigenfunctions_at(double x) const;

  /// Coercivity constant of A0: the smallest eigenvalue.
  double omega() const { return mu_.front(); }

  /// Closed-form B 1 and its derivative.
  double lift_function(double x) const { return lift_profile_(x); }
  double lift_derivative(double x) const { return lift_profile_derivative_(x); }

  /// sum_{n > M} mu_n b_n phi_n(1) / mu_n, the omitted integrated mass of the
  /// unit-flux boundary kernel (2 sum 1/mu_n for the heat basis).
  double integrated_tail() const { return tail_(size()); }

  /// Eigenvalue for any 0-based index, including beyond the truncation. NaN
  /// when the basis has no closed form.
  double eigenvalue_beyond(std::size_t n) const;

  double trace(const ModeVector& v) const;
  double evaluate(const ModeVector& v, double x) const;

  /// Coefficients of u0 by adaptive Gauss-Kronrod projection; assumes the
  /// eigenfunctions are orthogonal with norm^2 = 1/2 (sine families).
  ModeVector project(const std::function<double(double)>& u0, double tol = 1e-12) const;

 private:
  std::vector<double> mu_;
  std::vector<double> trace_;
  std::vector<double> lift_;
  std::vector<double> flux_gain_;
  Eigenfunction eigenfunction_;
  Profile lift_profile_;
  Profile lift_profile_derivative_;
  std::function<double(std::size_t)> tail_;
  std::function<double(std::size_t)> eigenvalue_formula_;
  std::string name_;
};

/// A(t) = a(t) A0 + c(t) I on the shared eigenbasis.
class OperatorFamily {
 public:
  explicit OperatorFamily(EigenBasis basis, Polynomial a = Polynomial::constant(1.0),
                          Polynomial c = Polynomial::constant(0.0));

  const EigenBasis& basis() const { return basis_; }
  const Polynomial& a() const { return a_; }
  const Polynomial& c() const { return c_; }
  std::size_t size() const { return basis_.size(); }
  bool is_constant() const { return a_.is_constant() && c_.is_constant(); }

  /// a(t) mu_n + c(t).
  double eigenvalue(std::size_t n, double t) const { return a_(t) * basis_.eigenvalue(n) + c_(t); }
  ModeVector frozen_eigenvalues(double t) const;

 private:
  EigenBasis basis_;
  Polynomial a_;
  Polynomial c_;
};

/// exp(-lambda A(t*)) v, modewise. Throws for lambda < 0.
ModeVector apply_exponential(const OperatorFamily& family, double frozen_time, const ModeVector& v,
                             double lambda);

/// A(t*)^gamma v, modewise. Throws for gamma < 0.
ModeVector apply_fractional_power(const OperatorFamily& family, double frozen_time,
                                  const ModeVector& v, double gamma);

/// Modes of B y.
ModeVector lift(const EigenBasis& basis, double y);

struct AssumptionReport {
  double omega = 0.0;              // min over samples of the smallest frozen eigenvalue
  bool strongly_positive = false;  // omega > 0 and a(t) > 0 on all samples
  double boundary_multiplier_max = 0.0;
  double boundary_multiplier_argmax = 0.0;
  double lipschitz_b3 = 0.0;  // max ||(A(t)-A(s)) A(t)^-gamma|| / |t-s|
  double lipschitz_b4 = 0.0;  // max ||A(t)^beta A(s)^-beta - I|| / |t-s|
  int samples = 0;
  std::vector<std::string> violations;
};

/// Sampled spot-check of positivity, the boundary multiplier bound and the
/// Lipschitz conditions on [0, T]. Violations are reported, never thrown.
AssumptionReport verify_assumptions(const OperatorFamily& family, double final_time, int samples,
                                    const ExpPoly& boundary_multiplier, double gamma = 1.0,
                                    double beta = 0.5);

}  // namespace duhamel
