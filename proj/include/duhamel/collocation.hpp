#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "duhamel/cgl_mesh.hpp"
#include "duhamel/spectral_operator.hpp"
#include "duhamel/time_function.hpp"

namespace duhamel {

enum class SolveMode { kDirect, kFixedPoint };

/// How the Robin product b(t) u(1, t) enters the Duhamel integrals.
///  kExactMultiplier:     the trace u(1, .) is interpolated, b stays exact.
///  kInterpolatedProduct: the product b u(1, .) is interpolated as a whole.
enum class BoundaryCoupling { kExactMultiplier, kInterpolatedProduct };

std::string to_string(SolveMode m);
std::string to_string(BoundaryCoupling c);
SolveMode parse_solve_mode(const std::string& s);
BoundaryCoupling parse_coupling(const std::string& s);

/// Invalid configuration or problem data; raised before any computation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure inside a stage solve. slab() is 1-based, 0 when not slab-specific.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int slab = 0);
  int slab() const { return slab_; }

 private:
  int slab_;
};

struct SolverConfig {
  int degree = 8;        // N
  int slabs = 1;         // K
  double gamma = 0.5;    // only used by scaled diagnostics
  std::size_t modes = 200;
  SolveMode mode = SolveMode::kDirect;
  double fp_tol = 1e-13;
  int fp_max_iter = 500;
  BoundaryCoupling coupling = BoundaryCoupling::kExactMultiplier;
  bool auto_refine = true;
  int max_refinements = 6;
  double contraction_limit = 0.5;

  /// Throws ConfigError.
  void validate() const;
};

/// f_n(t) = shape_n * time(t).
struct ForcingTerm {
  ModeVector shape;
  ExpPoly time;
};

/// u' + A(t) u = f(t) on (0, T], d1 u + b(t) u(1) = g(t), u(0) = u0.
struct EvolutionProblem {
  OperatorFamily family{EigenBasis::heat_robin(1)};
  double final_time = 1.0;
  ModeVector u0;
  ExpPoly g;
  ExpPoly b;
  std::vector<ForcingTerm> forcing;

  std::size_t modes() const { return family.size(); }
  /// Throws ConfigError on inconsistent sizes or non-positive T.
  void validate() const;
};

/// Per-slab coefficients of the stage equations
///
///   x_k = E_k x_{k-1} + sum_j alpha_kj o x_j + sum_j beta_kj q_j + phi_k,
///
/// k = 1..N, j = 0..N, with q_j the boundary unknown of the chosen coupling.
/// Index 0 of the k-dimension is unused.
struct CollocationCoefficients {
  int slab = 1;
  int degree = 0;
  BoundaryCoupling coupling = BoundaryCoupling::kExactMultiplier;
  bool alpha_zero = true;
  std::vector<ModeVector> decay;                 // E_k = exp(-A_k (tau/2) theta_k)
  std::vector<std::vector<ModeVector>> alpha;    // [k][j]
  std::vector<std::vector<ModeVector>> beta;     // [k][j]
  std::vector<ModeVector> phi;                   // [k]
  std::vector<ModeVector> frozen;                // [k] a(t_k) mu_n + c(t_k), k = 0..N
};

CollocationCoefficients assemble_coefficients(const EvolutionProblem& problem, const CglGrid& grid,
                                              const TimePartition& part, int slab,
                                              BoundaryCoupling coupling);

struct BlockSystem;

struct FixedPointHistory {
  std::vector<double> differences;
  std::vector<double> ratios;
  int iterations = 0;
  bool converged = false;
  double contraction_estimate = 0.0;
};

struct StageSolution {
  int slab = 1;
  std::vector<double> times;     // t_k, k = 0..N
  std::vector<ModeVector> x;     // mode coefficients at each node
  std::vector<double> trace;     // u(1, t_k) of the truncated series
  std::vector<double> y;         // b(t_k) * trace_k
  std::optional<FixedPointHistory> history;
};

StageSolution solve_stage_direct(const BlockSystem& system);
StageSolution solve_stage_fixed_point(const BlockSystem& system, const SolverConfig& config);

/// Max defect of the stage equations and of q = Lambda x after substituting
/// a computed stage.
double stage_residual(const BlockSystem& system, const StageSolution& stage);

struct SolutionTrace {
  CglGrid grid{1};
  TimePartition partition{1.0, 1};
  SolverConfig config;           // effective config (K after refinement)
  int refinements = 0;
  std::vector<double> contraction;  // |||Lambda D||| per slab
  double solve_seconds = 0.0;       // stage solves only, assembly excluded
  std::vector<StageSolution> stages;

  /// (time, x) over all nodes, the shared slab endpoints listed once.
  std::vector<std::pair<double, const ModeVector*>> nodes() const;
};

/// Sequential stage solves over [0, T]. Throws ConfigError or SolverError
/// (with slab index).
SolutionTrace march(const EvolutionProblem& problem, const SolverConfig& config);

}  // namespace duhamel
