#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "duhamel/harness.hpp"

using namespace duhamel;

namespace {

SolverConfig base_config(std::size_t m) {
  SolverConfig c;
  c.modes = m;
  return c;
}

}  // namespace

TEST_CASE("convergence study over N and K") {
  const HeatProblem hp = build_paper_example(200);
  const StudyResult r = run_convergence_study(hp, {2, 4, 8}, {1}, base_config(200));
  REQUIRE(r.rows.size() == 3u);
  CHECK(r.rows[1].max_eps1 * 10 <= r.rows[0].max_eps1);
  CHECK(r.rows[2].max_eps1 * 10 <= r.rows[1].max_eps1);
  const RateSummary rates = fit_rates(r);
  REQUIRE(rates.spectral_slope);
  CHECK(*rates.spectral_slope < -1.5);

  const StudyResult rk = run_convergence_study(hp, {4}, {1, 2, 4}, base_config(200));
  for (std::size_t i = 1; i < rk.rows.size(); ++i) CHECK(rk.rows[i].max_eps1 <= 2 * rk.rows[i - 1].max_eps1);

  const StudyResult par = run_convergence_study(hp, {2, 4, 8}, {1, 2}, base_config(200), 3);
  const StudyResult seq = run_convergence_study(hp, {2, 4, 8}, {1, 2}, base_config(200), 1);
  REQUIRE(par.rows.size() == seq.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(par.rows[i].N == seq.rows[i].N);
    CHECK(par.rows[i].K == seq.rows[i].K);
    CHECK(par.rows[i].max_eps1 == seq.rows[i].max_eps1);
    CHECK(par.rows[i].max_eps2 == seq.rows[i].max_eps2);
  }
}

TEST_CASE("failed cells are recorded and the study continues") {
  const HeatProblem hp = build_paper_example(50);
  SolverConfig c = base_config(50);
  c.mode = SolveMode::kFixedPoint;
  c.fp_max_iter = 1;
  const StudyResult r = run_convergence_study(hp, {4, 6}, {1}, c);
  REQUIRE(r.rows.size() == 2u);
  for (const auto& row : r.rows) CHECK_FALSE(row.ok());
}

TEST_CASE("backward Euler: scalar oracle, first-order rate, fine-step accuracy") {
  const HeatProblem decay = build_pure_decay(50);
  const ErrorReport e = baseline_backward_euler(decay, 100);
  const double mu1 = std::numbers::pi * std::numbers::pi / 4;
  const double oracle = std::fabs(std::pow(1.0 + mu1 / 100, -100) - std::exp(-mu1));
  CHECK(e.rows.back().eps1 == doctest::Approx(oracle).epsilon(0.05));
  CHECK_THROWS_AS(baseline_backward_euler(decay, 0), std::invalid_argument);

  const HeatProblem hp = build_paper_example(200);
  const double e100 = baseline_backward_euler(hp, 100).max_eps1();
  const double e200 = baseline_backward_euler(hp, 200).max_eps1();
  CHECK(e100 / e200 == doctest::Approx(2.0).epsilon(0.25));
  CHECK(baseline_backward_euler(hp, 10000).max_eps1() < 1e-3);

  const StudyResult b = run_baseline_study(hp, {50, 100, 200, 400});
  const RateSummary r = fit_rates(b);
  REQUIRE(r.algebraic_order);
  CHECK(*r.algebraic_order >= 0.8);
  CHECK(*r.algebraic_order <= 1.2);
  for (const auto& row : b.rows) CHECK(row.N == 0);
}

TEST_CASE("rate fitting on synthetic data") {
  StudyResult geo;
  for (int n = 1; n <= 6; ++n) geo.rows.push_back({n, 1, 10, std::pow(2.0, -n), 0.0, 0.0, "ok"});
  CHECK(std::fabs(*fit_rates(geo).spectral_slope + std::log(2.0)) < 1e-9);

  StudyResult alg;
  for (int k : {10, 20, 40, 80}) alg.rows.push_back({0, k, 10, 1.0 / k, 0.0, 0.0, "ok"});
  CHECK(std::fabs(*fit_rates(alg).algebraic_order - 1.0) < 1e-9);

  StudyResult few;
  few.rows.push_back({2, 1, 10, 1e-2, 0.0, 0.0, "ok"});
  few.rows.push_back({4, 1, 10, 1e-4, 0.0, 0.0, "ok"});
  CHECK_THROWS_AS(fit_rates(few), std::invalid_argument);
  CHECK_THROWS_AS(least_squares_slope({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("spectral decay per unit work beats the baseline") {
  const HeatProblem hp = build_paper_example(200);
  const StudyResult c = run_convergence_study(hp, {4, 8}, {1}, base_config(200));
  const StudyResult b = run_baseline_study(hp, {100, 200});
  // error change per doubling of work: stage cost grows like N^2 M
  const double coll = std::log(c.rows[1].max_eps1 / c.rows[0].max_eps1) / std::log(4.0);
  const double base = std::log(b.rows[1].max_eps1 / b.rows[0].max_eps1) / std::log(2.0);
  CHECK(coll < base);
}

TEST_CASE("collocation wins at equal wall time") {
  const HeatProblem hp = build_paper_example(200);
  SolverConfig c = base_config(200);
  c.degree = 8;
  const EfficiencyComparison cmp = compare_at_equal_wall_time(hp, c);
  CHECK(cmp.baseline_time_s >= cmp.collocation_time_s);
  CHECK(cmp.error_ratio >= 100.0);
}
