#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "duhamel/collocation.hpp"
#include "duhamel/kernels.hpp"

namespace duhamel {

/// A Robin heat problem u_t = a(t) u_xx - c(t) u + f on (0, 1), u(0, t) = 0,
/// u_x(1, t) + b(t) u(1, t) = g(t), with optional closed-form solution.
struct HeatProblem {
  std::string name;
  EvolutionProblem problem;
  std::function<double(double x, double t)> exact;  // empty when unknown
  std::optional<ExpPoly> exact_trace;                // u(1, t) in closed form
  std::function<double(double t)> exact_flux;        // u_x(1, t)
  /// Closed-form u0 coefficient for any 0-based mode index (tail bounds).
  std::function<double(std::size_t)> u0_coefficient;

  bool has_exact() const { return static_cast<bool>(exact); }
};

/// u = exp(-pi^2 t / 4) sin(pi x / 2), b = exp(-pi^2 t / 2), g = exp(-3 pi^2 t / 4).
HeatProblem build_paper_example(std::size_t modes = 200, double final_time = 1.0);

/// u = exp(-kappa^2 t) sin(kappa x) with b = exp(-pi^2 t / 2) and g matched.
/// Its boundary flux g - b u(1) is nonzero, unlike the benchmark instance.
HeatProblem build_manufactured_flux_problem(std::size_t modes = 200, double final_time = 1.0,
                                            double kappa = 1.0471975511965976);

/// g = 0, b = 0, u0 = first eigenfunction.
HeatProblem build_pure_decay(std::size_t modes = 200, double final_time = 1.0);

/// All data zero.
HeatProblem build_zero_problem(std::size_t modes = 200, double final_time = 1.0);

/// Truncated-system solution u_n(t) = p(t) b_n (b_n the lift coefficients)
/// with constant multiplier b0 and family a(t) A0 + c(t). Polynomial in t, so
/// degree-N collocation with N >= deg p reproduces it.
HeatProblem build_resolved_polynomial_problem(std::size_t modes, double final_time, const Polynomial& p,
                                              double b0, const Polynomial& a = Polynomial::constant(1.0),
                                              const Polynomial& c = Polynomial::constant(0.0));

/// Checks u_x(1, t) + b u(1, t) = g at the samples; max defect.
double boundary_compatibility_defect(const HeatProblem& hp, const std::vector<double>& times);

struct IntegralResidual {
  double sign = 1.0;
  double boundary = 0.0;  // max over samples, boundary equation
  double field = 0.0;     // max over samples, field equation at x = 1/2
  double bound = 0.0;     // max over samples of the truncation bound
  bool within_bound() const { return boundary <= bound && field <= bound; }
};

/// Substitutes the closed-form solution into
///   u(1, t) = v(1, t) + s int_0^t K(t - l) h(l) dl,
///   u(x, t) = v(x, t) + s int_0^t K1(t - l, x) h(l) dl,   h = g - b u(1),
/// integrating every mode exactly through moments. Requires a constant
/// family a = 1, c = 0, f = 0 and a closed-form trace. Throws otherwise.
IntegralResidual residual_of_exact_in_integral_equations(const HeatProblem& hp,
                                                         const std::vector<double>& times,
                                                         double sign = 1.0, double x_field = 0.5);

struct ErrorRow {
  double t = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

struct ErrorReport {
  int N = 0;
  int K = 0;
  std::size_t M = 0;
  std::string method = "collocation";
  ErrorRow initial;            // t = 0, imposed data
  std::vector<ErrorRow> rows;  // excludes t = 0

  double max_eps1() const;
  double max_eps2() const;
};

/// eps1 = |u(1, t) - trace|, eps2 = |u(1/2, t) - field(1/2)| at every node
/// after t = 0. Throws std::invalid_argument when no exact solution exists.
ErrorReport compute_errors(const SolutionTrace& trace, const HeatProblem& hp);

}  // namespace duhamel
