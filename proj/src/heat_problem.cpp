#include "duhamel/heat_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace duhamel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

double omega_of(std::size_t i) { return kPi * (2.0 * (i + 1) - 1.0) / 2.0; }

EvolutionProblem base_problem(std::size_t modes, double final_time) {
  EvolutionProblem p{OperatorFamily(EigenBasis::heat_robin(modes)), final_time, ModeVector(modes),
                     ExpPoly::zero(), ExpPoly::zero(), {}};
  return p;
}

}  // namespace

HeatProblem build_paper_example(std::size_t modes, double final_time) {
  HeatProblem hp;
  hp.name = "benchmark";
  hp.problem = base_problem(modes, final_time);
  hp.problem.u0[0] = 1.0;
  hp.problem.b = ExpPoly::exponential(1.0, kPi2 / 2.0);
  hp.problem.g = ExpPoly::exponential(1.0, 3.0 * kPi2 / 4.0);
  hp.exact = [](double x, double t) { return std::exp(-kPi2 * t / 4.0) * std::sin(kPi * x / 2.0); };
  hp.exact_trace = ExpPoly::exponential(1.0, kPi2 / 4.0);
  hp.exact_flux = [](double t) { return kPi / 2.0 * std::cos(kPi / 2.0) * std::exp(-kPi2 * t / 4.0); };
  hp.u0_coefficient = [](std::size_t n) { return n == 0 ? 1.0 : 0.0; };
  return hp;
}

HeatProblem build_manufactured_flux_problem(std::size_t modes, double final_time, double kappa) {
  HeatProblem hp;
  hp.name = "manufactured_flux";
  hp.problem = base_problem(modes, final_time);
  const double k2 = kappa * kappa;
  // 2 int_0^1 sin(kappa x) sin(w x) dx
  auto coeff = [kappa](std::size_t n) {
    const double w = omega_of(n);
    auto sinc = [](double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; };
    return sinc(kappa - w) - sinc(kappa + w);
  };
  for (std::size_t n = 0; n < modes; ++n) hp.problem.u0[n] = coeff(n);
  hp.problem.b = ExpPoly::exponential(1.0, kPi2 / 2.0);
  hp.problem.g = ExpPoly::exponential(kappa * std::cos(kappa), k2) +
                 ExpPoly::exponential(std::sin(kappa), k2 + kPi2 / 2.0);
  hp.exact = [kappa, k2](double x, double t) { return std::exp(-k2 * t) * std::sin(kappa * x); };
  hp.exact_trace = ExpPoly::exponential(std::sin(kappa), k2);
  hp.exact_flux = [kappa, k2](double t) { return kappa * std::cos(kappa) * std::exp(-k2 * t); };
  hp.u0_coefficient = coeff;
  return hp;
}

HeatProblem build_pure_decay(std::size_t modes, double final_time) {
  HeatProblem hp;
  hp.name = "pure_decay";
  hp.problem = base_problem(modes, final_time);
  hp.problem.u0[0] = 1.0;
  hp.exact = [](double x, double t) { return std::exp(-kPi2 * t / 4.0) * std::sin(kPi * x / 2.0); };
  hp.exact_trace = ExpPoly::exponential(1.0, kPi2 / 4.0);
  hp.exact_flux = [](double t) { return kPi / 2.0 * std::cos(kPi / 2.0) * std::exp(-kPi2 * t / 4.0); };
  hp.u0_coefficient = [](std::size_t n) { return n == 0 ? 1.0 : 0.0; };
  return hp;
}

HeatProblem build_zero_problem(std::size_t modes, double final_time) {
  HeatProblem hp;
  hp.name = "zero";
  hp.problem = base_problem(modes, final_time);
  hp.exact = [](double, double) { return 0.0; };
  hp.exact_trace = ExpPoly::zero();
  hp.exact_flux = [](double) { return 0.0; };
  hp.u0_coefficient = [](std::size_t) { return 0.0; };
  return hp;
}

HeatProblem build_resolved_polynomial_problem(std::size_t modes, double final_time, const Polynomial& p,
                                              double b0, const Polynomial& a, const Polynomial& c) {
  HeatProblem hp;
  hp.name = "resolved_polynomial";
  hp.problem = EvolutionProblem{OperatorFamily(EigenBasis::heat_robin(modes), a, c), final_time,
                                ModeVector(modes), ExpPoly::zero(), ExpPoly::constant(b0), {}};
  const auto& basis = hp.problem.family.basis();
  const ModeVector shape = lift(basis, 1.0);
  const double sm = basis.trace(shape);
  const ExpPoly pe = ExpPoly::polynomial(p);
  hp.problem.u0 = p(0.0) * shape;
  // flux h = p cancels a mu_n b_n h; what remains is (p' + c p) b_n
  hp.problem.g = pe.scaled(1.0 + b0 * sm);
  hp.problem.forcing.push_back({shape, pe.derivative() + ExpPoly::polynomial(c) * pe});
  const auto lifted = basis;
  hp.exact = [lifted, shape, p](double x, double t) { return p(t) * lifted.evaluate(shape, x); };
  hp.exact_trace = pe.scaled(sm);
  return hp;
}

double boundary_compatibility_defect(const HeatProblem& hp, const std::vector<double>& times) {
  if (!hp.exact || !hp.exact_flux) throw std::invalid_argument("compatibility check needs the exact solution");
  double d = 0.0;
  for (double t : times) {
    d = std::max(d, std::fabs(hp.exact_flux(t) + hp.problem.b(t) * hp.exact(1.0, t) - hp.problem.g(t)));
  }
  return d;
}

IntegralResidual residual_of_exact_in_integral_equations(const HeatProblem& hp,
                                                         const std::vector<double>& times, double sign,
                                                         double x_field) {
  const auto& fam = hp.problem.family;
  if (!hp.exact || !hp.exact_trace) throw std::invalid_argument("residual check needs a closed-form trace");
  if (!fam.is_constant() || fam.a()(0.0) != 1.0 || fam.c()(0.0) != 0.0 || !hp.problem.forcing.empty()) {
    throw std::invalid_argument("residual check supports the plain heat operator only");
  }
  const auto& basis = fam.basis();
  const KernelSeries ks(basis);
  const ExpPoly h = hp.problem.g + (hp.problem.b * *hp.exact_trace).scaled(-1.0);
  const auto mu = basis.eigenvalues();
  const auto gain = basis.flux_gain();
  const auto tr = basis.boundary_trace();
  const auto phi_x = basis.eigenfunctions_at(x_field);

  IntegralResidual r;
  r.sign = sign;
  for (double t : times) {
    double flux_b = 0.0, flux_f = 0.0;
    for (std::size_t n = 0; n < basis.size(); ++n) {
      // int_0^t exp(-mu (t - l)) h(l) dl, term by term
      double integral = 0.0;
      for (const auto& term : h.terms()) {
        const double shifted = mu[n] - term.rate;
        double moment;
        if (shifted > 0.0) {
          moment = moment_integrals(shifted, 0.0, t, term.power).values[term.power];
        } else {
          moment = std::pow(t, term.power + 1) * unit_moments(shifted * t, term.power)[term.power];
        }
        integral += term.coefficient * std::exp(-term.rate * t) * moment;
      }
      flux_b += gain[n] * tr[n] * integral;
      flux_f += gain[n] * phi_x[n] * integral;
    }
    r.boundary = std::max(r.boundary, std::fabs(hp.exact(1.0, t) - ks.homogeneous_v(hp.problem.u0, 1.0, t) - sign * flux_b));
    r.field = std::max(r.field, std::fabs(hp.exact(x_field, t) - ks.homogeneous_v(hp.problem.u0, x_field, t) - sign * flux_f));

    double sup_h = 0.0;
    constexpr int kSamples = 4001;
    for (int i = 0; i < kSamples; ++i) sup_h = std::max(sup_h, std::fabs(h(t * i / (kSamples - 1))));
    double v_tail = 0.0;
    if (hp.u0_coefficient) {
      for (std::size_t n = basis.size(); n < 2 * basis.size(); ++n) {
        v_tail += std::fabs(hp.u0_coefficient(n)) * std::exp(-basis.eigenvalue_beyond(n) * t);
      }
    }
    r.bound = std::max(r.bound, sup_h * ks.tail_bound() + v_tail);
  }
  return r;
}

double ErrorReport::max_eps1() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.eps1);
  return m;
}

double ErrorReport::max_eps2() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.eps2);
  return m;
}

ErrorReport compute_errors(const SolutionTrace& trace, const HeatProblem& hp) {
  if (!hp.exact) throw std::invalid_argument("error report unavailable: no exact solution");
  const auto& basis = hp.problem.family.basis();
  const auto phi_half = basis.eigenfunctions_at(0.5);
  ErrorReport rep;
  rep.N = trace.config.degree;
  rep.K = trace.config.slabs;
  rep.M = basis.size();
  auto field_at_half = [&](const ModeVector& x) {
    double mid = 0.0;
    for (std::size_t n = 0; n < basis.size(); ++n) mid += phi_half[n] * x[n];
    return mid;
  };
  if (!trace.stages.empty()) {
    const auto& first = trace.stages.front();
    rep.initial = {first.times[0], std::fabs(hp.exact(1.0, first.times[0]) - first.trace[0]),
                   std::fabs(hp.exact(0.5, first.times[0]) - field_at_half(first.x[0]))};
  }
  for (std::size_t s = 0; s < trace.stages.size(); ++s) {
    const auto& st = trace.stages[s];
    for (std::size_t k = 1; k < st.x.size(); ++k) {
      const double t = st.times[k];
      rep.rows.push_back({t, std::fabs(hp.exact(1.0, t) - st.trace[k]),
                          std::fabs(hp.exact(0.5, t) - field_at_half(st.x[k]))});
    }
  }
  return rep;
}

}  // namespace duhamel
