#include "duhamel/collocation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "duhamel/block_system.hpp"
#include "weighted_integral.hpp"

namespace duhamel {

std::string to_string(SolveMode m) { return m == SolveMode::kDirect ? "direct" : "picard"; }

std::string to_string(BoundaryCoupling c) {
  return c == BoundaryCoupling::kExactMultiplier ? "exact_multiplier" : "interpolated_product";
}

SolveMode parse_solve_mode(const std::string& s) {
  if (s == "direct") return SolveMode::kDirect;
  if (s == "picard" || s == "fixed_point") return SolveMode::kFixedPoint;
  throw ConfigError("unknown solve mode '" + s + "' (expected direct or picard)");
}

BoundaryCoupling parse_coupling(const std::string& s) {
  if (s == "exact_multiplier") return BoundaryCoupling::kExactMultiplier;
  if (s == "interpolated_product") return BoundaryCoupling::kInterpolatedProduct;
  throw ConfigError("unknown coupling '" + s + "'");
}

SolverError::SolverError(const std::string& what, int slab)
    : std::runtime_error(slab > 0 ? what + " (slab " + std::to_string(slab) + ")" : what), slab_(slab) {}

void SolverConfig::validate() const {
  if (degree < 1) throw ConfigError("N must be >= 1");
  if (slabs < 1) throw ConfigError("K must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (modes < 1) throw ConfigError("M must be >= 1");
  if (!(fp_tol > 0.0)) throw ConfigError("fp_tol must be > 0");
  if (fp_max_iter < 1) throw ConfigError("fp_max_iter must be >= 1");
  if (max_refinements < 0) throw ConfigError("max_refinements must be >= 0");
  if (!(contraction_limit > 0.0 && contraction_limit < 1.0)) {
    throw ConfigError("contraction_limit must lie in (0, 1)");
  }
}

void EvolutionProblem::validate() const {
  if (!(final_time > 0.0)) throw ConfigError("T must be > 0");
  if (u0.size() != modes()) throw ConfigError("u0 mode count does not match the basis");
  for (const auto& f : forcing) {
    if (f.shape.size() != modes()) throw ConfigError("forcing mode count does not match the basis");
  }
}

namespace {

bool exp_poly_is_constant(const ExpPoly& p) {
  for (const auto& t : p.terms()) {
    if (t.power != 0 || t.rate != 0.0) return false;
  }
  return true;
}

void assemble_phi(const EvolutionProblem& problem, const CglGrid& grid, const TimePartition& part,
                  int slab, CollocationCoefficients& c) {
  const int n_deg = grid.degree();
  const std::size_t m = problem.modes();
  const double half_tau = 0.5 * part.tau();
  const auto gain = problem.family.basis().flux_gain();
  const ExpPoly a = ExpPoly::polynomial(problem.family.a());
  const ExpPoly ag = a * problem.g;

  c.phi.assign(n_deg + 1, ModeVector(m));
  std::vector<double> out(1);
  for (int k = 1; k <= n_deg; ++k) {
    detail::SubintervalIntegrator ig(grid, part, slab, k, ag, false);
    std::vector<detail::SubintervalIntegrator> forcing;
    for (const auto& f : problem.forcing) forcing.emplace_back(grid, part, slab, k, f.time, false);
    for (std::size_t n = 0; n < m; ++n) {
      const double nu = c.frozen[k][n] * half_tau;
      double value = 0.0;
      if (!ig.empty()) {
        ig.integrate(nu, out);
        value += gain[n] * out[0];
      }
      for (std::size_t i = 0; i < forcing.size(); ++i) {
        const double shape = problem.forcing[i].shape[n];
        if (shape == 0.0 || forcing[i].empty()) continue;
        forcing[i].integrate(nu, out);
        value += shape * out[0];
      }
      c.phi[k][n] = half_tau * value;
    }
  }
}

}  // namespace

CollocationCoefficients assemble_coefficients(const EvolutionProblem& problem, const CglGrid& grid,
                                              const TimePartition& part, int slab,
                                              BoundaryCoupling coupling) {
  const int n_deg = grid.degree();
  const std::size_t m = problem.modes();
  const auto& family = problem.family;
  const auto mu = family.basis().eigenvalues();
  const auto gain = family.basis().flux_gain();
  const double half_tau = 0.5 * part.tau();

  CollocationCoefficients c;
  c.slab = slab;
  c.degree = n_deg;
  c.coupling = coupling;
  c.alpha_zero = family.is_constant();

  c.frozen.resize(n_deg + 1);
  for (int k = 0; k <= n_deg; ++k) c.frozen[k] = family.frozen_eigenvalues(part.map_to_slab(slab, grid.node(k)));

  c.decay.assign(n_deg + 1, ModeVector(m, 1.0));
  for (int k = 1; k <= n_deg; ++k) {
    const double h = half_tau * grid.spacing(k);
    for (std::size_t n = 0; n < m; ++n) c.decay[k][n] = std::exp(-c.frozen[k][n] * h);
  }

  const std::vector<ModeVector> row(n_deg + 1, ModeVector(m));
  c.alpha.assign(n_deg + 1, row);
  c.beta.assign(n_deg + 1, row);

  const ExpPoly a = ExpPoly::polynomial(family.a());
  const ExpPoly c_poly = ExpPoly::polynomial(family.c());
  const ExpPoly q_beta = coupling == BoundaryCoupling::kExactMultiplier ? a * problem.b : a;
  std::vector<double> ob(n_deg + 1), oa(n_deg + 1), oc(n_deg + 1);

  for (int k = 1; k <= n_deg; ++k) {
    const double tk = part.map_to_slab(slab, grid.node(k));
    detail::SubintervalIntegrator ib(grid, part, slab, k, q_beta, true);
    std::optional<detail::SubintervalIntegrator> ia, ic;
    if (!c.alpha_zero) {
      ia.emplace(grid, part, slab, k, ExpPoly::constant(family.a()(tk)) + a.scaled(-1.0), true);
      ic.emplace(grid, part, slab, k, ExpPoly::constant(family.c()(tk)) + c_poly.scaled(-1.0), true);
    }
    for (std::size_t n = 0; n < m; ++n) {
      const double nu = c.frozen[k][n] * half_tau;
      ib.integrate(nu, ob);
      for (int j = 0; j <= n_deg; ++j) c.beta[k][j][n] = -half_tau * gain[n] * ob[j];
      if (!c.alpha_zero) {
        ia->integrate(nu, oa);
        ic->integrate(nu, oc);
        for (int j = 0; j <= n_deg; ++j) c.alpha[k][j][n] = half_tau * (mu[n] * oa[j] + oc[j]);
      }
    }
  }
  assemble_phi(problem, grid, part, slab, c);

  auto check = [&](const ModeVector& v) {
    for (double e : v) {
      if (!std::isfinite(e)) throw SolverError("non-finite collocation coefficient", slab);
    }
  };
  for (int k = 1; k <= n_deg; ++k) {
    check(c.decay[k]);
    check(c.phi[k]);
    for (int j = 0; j <= n_deg; ++j) {
      check(c.alpha[k][j]);
      check(c.beta[k][j]);
    }
  }
  return c;
}

std::vector<std::pair<double, const ModeVector*>> SolutionTrace::nodes() const {
  std::vector<std::pair<double, const ModeVector*>> out;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& st = stages[s];
    for (std::size_t k = (s == 0 ? 0 : 1); k < st.x.size(); ++k) out.emplace_back(st.times[k], &st.x[k]);
  }
  return out;
}

namespace {

struct MarchOutcome {
  SolutionTrace trace;
  int refine_slab = 0;  // > 0: contraction check asked for a finer partition
  double refine_value = 0.0;
};

MarchOutcome march_once(const EvolutionProblem& problem, const SolverConfig& config, bool may_refine) {
  MarchOutcome out;
  SolutionTrace& tr = out.trace;
  tr.grid = CglGrid(config.degree);
  tr.partition = TimePartition(problem.final_time, config.slabs);
  tr.config = config;

  const bool slab_independent = problem.family.is_constant() && exp_poly_is_constant(problem.b);
  ModeVector x0 = problem.u0;
  double q_carry = 0.0;
  std::optional<CollocationCoefficients> cached;
  for (int l = 1; l <= config.slabs; ++l) {
    CollocationCoefficients coeffs;
    if (slab_independent && cached) {
      coeffs = *cached;
      coeffs.slab = l;
      assemble_phi(problem, tr.grid, tr.partition, l, coeffs);
    } else {
      coeffs = assemble_coefficients(problem, tr.grid, tr.partition, l, config.coupling);
      if (slab_independent) cached = coeffs;
    }
    BlockSystem sys = assemble_block_system(coeffs, problem, tr.grid, tr.partition, x0);
    // reuse the reduced boundary value so adjacent slabs agree exactly at the knot
    if (l > 1) sys.q0 = q_carry;
    const double contraction = sys.contraction();
    tr.contraction.push_back(contraction);
    if (contraction >= config.contraction_limit && may_refine) {
      out.refine_slab = l;
      out.refine_value = contraction;
      return out;
    }
    if (!(contraction < 1.0)) {
      std::ostringstream msg;
      msg << "slab too long; increase K (|||Lambda D||| = " << contraction << ")";
      throw SolverError(msg.str(), l);
    }

    const auto start = std::chrono::steady_clock::now();
    StageSolution stage;
    try {
      stage = config.mode == SolveMode::kDirect ? solve_stage_direct(sys)
                                                : solve_stage_fixed_point(sys, config);
    } catch (const SolverError& e) {
      if (e.slab() > 0) throw;
      throw SolverError(e.what(), l);
    }
    tr.solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    x0 = stage.x.back();
    q_carry = config.coupling == BoundaryCoupling::kExactMultiplier ? stage.trace.back() : stage.y.back();
    tr.stages.push_back(std::move(stage));
  }
  return out;
}

}  // namespace

SolutionTrace march(const EvolutionProblem& problem, const SolverConfig& config) {
  config.validate();
  problem.validate();
  if (config.modes != problem.modes()) {
    throw ConfigError("config M = " + std::to_string(config.modes) + " does not match the problem's " +
                      std::to_string(problem.modes()) + " modes");
  }
  SolverConfig current = config;
  for (int attempt = 0;; ++attempt) {
    const bool may_refine = current.auto_refine && attempt < current.max_refinements;
    MarchOutcome out = march_once(problem, current, may_refine);
    if (out.refine_slab == 0) {
      out.trace.refinements = attempt;
      return std::move(out.trace);
    }
    current.slabs *= 2;
  }
}

}  // namespace duhamel
