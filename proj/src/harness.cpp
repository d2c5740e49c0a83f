#include "duhamel/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "duhamel/simd.hpp"

namespace duhamel {

namespace {

using Clock = std::chrono::steady_clock;

StudyRow run_cell(const HeatProblem& hp, int N, int K, const SolverConfig& base) {
  StudyRow row;
  row.N = N;
  row.K = K;
  row.M = hp.problem.modes();
  try {
    SolverConfig cfg = base;
    cfg.degree = N;
    cfg.slabs = K;
    cfg.modes = hp.problem.modes();
    const SolutionTrace tr = march(hp.problem, cfg);
    const ErrorReport rep = compute_errors(tr, hp);
    row.max_eps1 = rep.max_eps1();
    row.max_eps2 = rep.max_eps2();
    row.wall_time_s = tr.solve_seconds;
  } catch (const std::exception& e) {
    row.status = e.what();
  }
  return row;
}

void sort_rows(std::vector<StudyRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) {
    return a.N != b.N ? a.N < b.N : a.K < b.K;
  });
}

}  // namespace

StudyResult run_convergence_study(const HeatProblem& hp, const std::vector<int>& Ns,
                                  const std::vector<int>& Ks, const SolverConfig& base, int threads) {
  StudyResult res;
  std::vector<std::pair<int, int>> cells;
  for (int n : Ns) {
    for (int k : Ks) cells.emplace_back(n, k);
  }
  if (threads <= 1) {
    for (auto [n, k] : cells) res.rows.push_back(run_cell(hp, n, k, base));
  } else {
    std::vector<std::future<StudyRow>> pending;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (pending.size() >= static_cast<std::size_t>(threads)) {
        res.rows.push_back(pending.front().get());
        pending.erase(pending.begin());
      }
      pending.push_back(std::async(std::launch::async, run_cell, std::cref(hp), cells[i].first,
                                   cells[i].second, std::cref(base)));
    }
    for (auto& f : pending) res.rows.push_back(f.get());
  }
  sort_rows(res.rows);
  return res;
}

ErrorReport baseline_backward_euler(const HeatProblem& hp, int steps, double* wall_time_s) {
  if (steps < 1) throw std::invalid_argument("backward Euler needs at least one step");
  if (!hp.exact) throw std::invalid_argument("error report unavailable: no exact solution");
  const auto& p = hp.problem;
  const auto& fam = p.family;
  const auto& basis = fam.basis();
  const std::size_t m = basis.size();
  const double dt = p.final_time / steps;
  const auto tr = basis.boundary_trace();
  const auto gain = basis.flux_gain();
  const auto phi_half = basis.eigenfunctions_at(0.5);

  ModeVector u = p.u0;
  ModeVector r(m), c(m), pred(m);
  std::vector<double> traces(steps + 1), mids(steps + 1);
  traces[0] = simd::dot(tr, u.span());
  mids[0] = simd::dot(phi_half, u.span());

  const auto start = Clock::now();
  for (int s = 1; s <= steps; ++s) {
    const double t = s * dt;
    const double at = fam.a()(t), ct = fam.c()(t);
    for (std::size_t n = 0; n < m; ++n) {
      r[n] = 1.0 / (1.0 + dt * (at * basis.eigenvalue(n) + ct));
      c[n] = dt * at * gain[n] * r[n];
    }
    pred = u;
    for (const auto& f : p.forcing) simd::axpy(dt * f.time(t), f.shape.span(), pred.span());
    simd::multiply(r.span(), pred.span(), pred.span());
    // h = g - b (phi . pred + h phi . c)
    const double bt = p.b(t);
    const double h = (p.g(t) - bt * simd::dot(tr, pred.span())) / (1.0 + bt * simd::dot(tr, c.span()));
    u = pred;
    simd::axpy(h, c.span(), u.span());
    traces[s] = simd::dot(tr, u.span());
    mids[s] = simd::dot(phi_half, u.span());
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (wall_time_s) *wall_time_s = elapsed;

  ErrorReport rep;
  rep.N = 0;
  rep.K = steps;
  rep.M = m;
  rep.method = "backward_euler";
  rep.initial = {0.0, std::fabs(hp.exact(1.0, 0.0) - traces[0]), std::fabs(hp.exact(0.5, 0.0) - mids[0])};
  rep.rows.reserve(steps);
  for (int s = 1; s <= steps; ++s) {
    const double t = s * dt;
    rep.rows.push_back({t, std::fabs(hp.exact(1.0, t) - traces[s]), std::fabs(hp.exact(0.5, t) - mids[s])});
  }
  return rep;
}

StudyResult run_baseline_study(const HeatProblem& hp, const std::vector<int>& steps) {
  StudyResult res;
  res.method = "backward_euler";
  for (int k : steps) {
    StudyRow row;
    row.N = 0;
    row.K = k;
    row.M = hp.problem.modes();
    try {
      const ErrorReport rep = baseline_backward_euler(hp, k, &row.wall_time_s);
      row.max_eps1 = rep.max_eps1();
      row.max_eps2 = rep.max_eps2();
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    res.rows.push_back(row);
  }
  sort_rows(res.rows);
  return res;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

RateSummary fit_rates(const StudyResult& result) {
  RateSummary out;
  std::vector<StudyRow> ok;
  for (const auto& r : result.rows) {
    if (r.ok() && r.max_eps1 > 0.0 && std::isfinite(r.max_eps1)) ok.push_back(r);
  }
  auto distinct = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
  };

  // spectral: the K with the most distinct N
  std::vector<int> ks, ns;
  for (const auto& r : ok) {
    ks.push_back(r.K);
    ns.push_back(r.N);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  for (int k : ks) {
    std::vector<double> x, y;
    std::vector<int> nvals;
    for (const auto& r : ok) {
      if (r.K == k && r.N > 0) {
        x.push_back(r.N);
        y.push_back(std::log(r.max_eps1));
        nvals.push_back(r.N);
      }
    }
    if (distinct(nvals) >= 3 && (!out.spectral_slope || static_cast<int>(x.size()) > out.rows_used)) {
      out.spectral_slope = least_squares_slope(x, y);
      out.spectral_slope_log10 = *out.spectral_slope / std::log(10.0);
      out.rows_used = static_cast<int>(x.size());
    }
  }
  for (int n : ns) {
    std::vector<double> x, y;
    std::vector<int> kvals;
    for (const auto& r : ok) {
      if (r.N == n) {
        x.push_back(std::log(r.K));
        y.push_back(std::log(r.max_eps1));
        kvals.push_back(r.K);
      }
    }
    if (distinct(kvals) >= 3 && !out.algebraic_order) {
      out.algebraic_order = -least_squares_slope(x, y);
      out.rows_used = std::max(out.rows_used, static_cast<int>(x.size()));
    }
  }
  if (!out.spectral_slope && !out.algebraic_order) {
    throw std::invalid_argument("fit_rates: need >= 3 rows varying N or K");
  }
  return out;
}

EfficiencyComparison compare_at_equal_wall_time(const HeatProblem& hp, const SolverConfig& config) {
  EfficiencyComparison cmp;
  cmp.N = config.degree;
  cmp.K = config.slabs;
  SolverConfig cfg = config;
  cfg.modes = hp.problem.modes();

  // best of several repetitions for a stable timing
  double best = std::numeric_limits<double>::infinity();
  ErrorReport rep;
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    const SolutionTrace tr = march(hp.problem, cfg);
    best = std::min(best, tr.solve_seconds);
    if (rep_i == 0) rep = compute_errors(tr, hp);
  }
  cmp.collocation_error = rep.max_eps1();
  cmp.collocation_time_s = best;

  for (int steps = 1;; steps *= 2) {
    double t = std::numeric_limits<double>::infinity();
    ErrorReport be;
    for (int rep_i = 0; rep_i < 3; ++rep_i) {
      double w = 0.0;
      be = baseline_backward_euler(hp, steps, &w);
      t = std::min(t, w);
    }
    if (t >= best || steps >= (1 << 24)) {
      cmp.baseline_steps = steps;
      cmp.baseline_error = be.max_eps1();
      cmp.baseline_time_s = t;
      break;
    }
  }
  cmp.error_ratio = cmp.baseline_error / cmp.collocation_error;
  return cmp;
}

}  // namespace duhamel
