#pragma once

#include <span>
#include <vector>

namespace duhamel {

/// Real polynomial in monomial form, coefficients lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);
  static Polynomial constant(double c) { return Polynomial({c}); }

  double operator()(double t) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const;
  std::span<const double> coefficients() const { return coeffs_; }

  /// Coefficients of p(t0 + h u) as a polynomial in u.
  std::vector<double> shifted(double t0, double h) const;

 private:
  std::vector<double> coeffs_{0.0};
};

/// One term c * t^p * exp(-r t).
struct ExpTerm {
  double coefficient = 0.0;
  int power = 0;
  double rate = 0.0;
};

/// q(t0 + h u) = exp(-rate * t0) * exp(-rate * h * u) * P(u) for one rate group.
struct LocalGroup {
  double rate = 0.0;
  std::vector<double> poly;
};

/// Finite sum of exponential-polynomial terms. Covers polynomial data and the
/// exponential boundary data of the heat examples, and keeps every Duhamel
/// integral against exp(-mu (t - lambda)) expressible through moments.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms);

  static ExpPoly zero() { return ExpPoly(); }
  static ExpPoly constant(double c);
  static ExpPoly exponential(double c, double rate);
  static ExpPoly polynomial(const Polynomial& p);

  double operator()(double t) const;
  std::span<const ExpTerm> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExpPoly operator*(const ExpPoly& other) const;
  ExpPoly operator+(const ExpPoly& other) const;
  ExpPoly scaled(double s) const;

  /// Pointwise derivative, as another ExpPoly.
  ExpPoly derivative() const;

  /// Terms grouped by rate and re-expanded in the local variable u of
  /// t = t0 + h u.
  std::vector<LocalGroup> localize(double t0, double h) const;

 private:
  void normalize();
  std::vector<ExpTerm> terms_;
};

std::vector<double> poly_multiply(std::span<const double> a, std::span<const double> b);
double poly_eval(std::span<const double> c, double u);

}  // namespace duhamel
