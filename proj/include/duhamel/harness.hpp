#pragma once

#include <optional>
#include <string>
#include <vector>

#include "duhamel/heat_problem.hpp"

namespace duhamel {

struct StudyRow {
  int N = 0;  // 0 for baseline rows
  int K = 0;  // slabs, or time steps for the baseline
  std::size_t M = 0;
  double max_eps1 = 0.0;
  double max_eps2 = 0.0;
  double wall_time_s = 0.0;
  std::string status = "ok";  // error message for failed cells

  bool ok() const { return status == "ok"; }
};

struct StudyResult {
  std::string method = "collocation";
  std::vector<StudyRow> rows;  // sorted by (N, K)
};

/// One march per (N, K); failures are recorded in the row and the study
/// continues. threads > 1 runs cells concurrently.
StudyResult run_convergence_study(const HeatProblem& hp, const std::vector<int>& Ns,
                                  const std::vector<int>& Ks, const SolverConfig& base, int threads = 1);

/// Modal implicit Euler with the Robin flux eliminated through the lift at
/// every step. wall_time_s, when given, receives the stepping time.
ErrorReport baseline_backward_euler(const HeatProblem& hp, int steps, double* wall_time_s = nullptr);

StudyResult run_baseline_study(const HeatProblem& hp, const std::vector<int>& steps);

struct RateSummary {
  std::optional<double> spectral_slope;        // d ln(max_eps1) / dN
  std::optional<double> spectral_slope_log10;  // d log10(max_eps1) / dN
  std::optional<double> algebraic_order;       // -d ln(max_eps1) / d ln K
  int rows_used = 0;
};

/// Least-squares slope of y against x. Throws std::invalid_argument for
/// fewer than 2 points or constant x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spectral slope from rows with >= 3 distinct N at one K; algebraic order
/// from >= 3 distinct K at one N. Throws std::invalid_argument when neither
/// fit has enough rows.
RateSummary fit_rates(const StudyResult& result);

struct EfficiencyComparison {
  int N = 0;
  int K = 0;
  double collocation_error = 0.0;
  double collocation_time_s = 0.0;
  int baseline_steps = 0;
  double baseline_error = 0.0;
  double baseline_time_s = 0.0;
  double error_ratio = 0.0;  // baseline / collocation
};

/// Runs the collocation solve, then the smallest baseline (steps doubling
/// from 1) whose stepping time is at least the collocation solve time.
EfficiencyComparison compare_at_equal_wall_time(const HeatProblem& hp, const SolverConfig& config);

}  // namespace duhamel
