#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "duhamel/heat_problem.hpp"

using namespace duhamel;

namespace {

constexpr double kPi = std::numbers::pi;

SolverConfig config_for(int n, int k, std::size_t m) {
  SolverConfig c;
  c.degree = n;
  c.slabs = k;
  c.modes = m;
  return c;
}

}  // namespace

TEST_CASE("benchmark instance data and exact solution") {
  const HeatProblem hp = build_paper_example(100);
  CHECK(hp.exact(1.0, 0.0) == 1.0);
  CHECK(hp.problem.u0[0] == 1.0);
  for (std::size_t n = 1; n < 100; ++n) CHECK(hp.problem.u0[n] == 0.0);
  std::vector<double> ts;
  for (int i = 0; i <= 50; ++i) ts.push_back(i / 50.0);
  CHECK(boundary_compatibility_defect(hp, ts) < 1e-12);
  for (double t : ts) CHECK(hp.problem.b(t) * hp.exact(1.0, t) == doctest::Approx(hp.problem.g(t)).epsilon(1e-14));
  // u_t - u_xx vanishes
  const double h = 1e-4;
  for (double x : {0.2, 0.7}) {
    for (double t : {0.1, 0.6}) {
      const double ut = (hp.exact(x, t + h) - hp.exact(x, t - h)) / (2 * h);
      const double uxx = (hp.exact(x + h, t) - 2 * hp.exact(x, t) + hp.exact(x - h, t)) / (h * h);
      CHECK(std::fabs(ut - uxx) < 1e-6);
    }
  }
}

TEST_CASE("manufactured flux problem is consistent") {
  const HeatProblem hp = build_manufactured_flux_problem(200);
  std::vector<double> ts{0.0, 0.3, 0.8};
  CHECK(boundary_compatibility_defect(hp, ts) < 1e-12);
  const ModeVector projected = hp.problem.family.basis().project([](double x) { return std::sin(kPi / 3 * x); });
  for (std::size_t n = 0; n < 30; ++n) CHECK(std::fabs(projected[n] - hp.problem.u0[n]) < 1e-11);
  // flux g - b u(1) is bounded away from zero
  const double h0 = hp.problem.g(0.0) - hp.problem.b(0.0) * hp.exact(1.0, 0.0);
  CHECK(std::fabs(h0) > 0.4);
}

TEST_CASE("exact solution satisfies the integral equations within the tail bound") {
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const HeatProblem bench = build_paper_example(100);
  const auto rp = residual_of_exact_in_integral_equations(bench, ts);
  CHECK(rp.within_bound());
  CHECK(rp.boundary < 1e-14);

  const HeatProblem decay = build_pure_decay(100);
  const auto rd = residual_of_exact_in_integral_equations(decay, ts);
  CHECK(rd.boundary < 1e-12);
  CHECK(rd.field < 1e-12);
}

TEST_CASE("sign convention: exactly one candidate passes on a problem with flux") {
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const HeatProblem hp = build_manufactured_flux_problem(200);
  const auto plus = residual_of_exact_in_integral_equations(hp, ts, +1.0);
  const auto minus = residual_of_exact_in_integral_equations(hp, ts, -1.0);
  CHECK(plus.within_bound());
  CHECK_FALSE(minus.within_bound());
  CHECK(minus.boundary > 100 * plus.bound);
}

TEST_CASE("doubling M shrinks the residual with the tail bounds") {
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const auto r1 = residual_of_exact_in_integral_equations(build_manufactured_flux_problem(100), ts);
  const auto r2 = residual_of_exact_in_integral_equations(build_manufactured_flux_problem(200), ts);
  const double tail_ratio = EigenBasis::heat_robin(200).integrated_tail() / EigenBasis::heat_robin(100).integrated_tail();
  CHECK(r2.boundary <= r1.boundary * tail_ratio);
  CHECK(r2.bound < r1.bound);
}

TEST_CASE("error reports: magnitudes, ordering in N, determinism") {
  const HeatProblem hp = build_paper_example(100);
  const ErrorReport e8 = compute_errors(march(hp.problem, config_for(8, 1, 100)), hp);
  const ErrorReport e4 = compute_errors(march(hp.problem, config_for(4, 1, 100)), hp);
  const ErrorReport e2 = compute_errors(march(hp.problem, config_for(2, 1, 100)), hp);
  CHECK(e8.max_eps1() <= 1e-6);
  CHECK(e2.max_eps1() >= 1e-3);
  CHECK(e2.max_eps1() <= 1e-1);
  CHECK(e8.max_eps1() < e4.max_eps1());
  CHECK(e4.max_eps1() < e2.max_eps1());
  for (const auto* e : {&e2, &e4, &e8}) {
    CHECK(e->initial.eps1 == 0.0);
    CHECK(e->initial.eps2 == 0.0);
    CHECK(e->max_eps2() <= 10 * e->max_eps1());
    for (const auto& r : e->rows) {
      CHECK(std::isfinite(r.eps1));
      CHECK(r.eps1 >= 0.0);
      CHECK(r.t > 0.0);
    }
  }
  CHECK(e2.rows.size() == 2u);
  CHECK(e8.N == 8);
  CHECK(e8.M == 100u);

  const ErrorReport again = compute_errors(march(hp.problem, config_for(8, 1, 100)), hp);
  REQUIRE(again.rows.size() == e8.rows.size());
  for (std::size_t i = 0; i < e8.rows.size(); ++i) {
    CHECK(again.rows[i].eps1 == e8.rows[i].eps1);
    CHECK(again.rows[i].eps2 == e8.rows[i].eps2);
  }

  HeatProblem no_exact = hp;
  no_exact.exact = nullptr;
  CHECK_THROWS_AS(compute_errors(march(hp.problem, config_for(2, 1, 100)), no_exact), std::invalid_argument);
}
