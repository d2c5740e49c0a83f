#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "duhamel/harness.hpp"
#include "duhamel/kernels.hpp"
#include "duhamel/report_io.hpp"

namespace duhamel::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string problem = "benchmark";
  int N = 8;
  int K = 1;
  std::size_t M = 200;
  double T = 1.0;
  double gamma = 0.5;
  std::string mode = "direct";
  std::string coupling = "exact_multiplier";
  double fp_tol = 1e-13;
  int fp_max_iter = 500;
  bool no_refine = false;
  std::string out;
  std::string report;
  std::string format = "csv";
  int table_n = 8;
  std::vector<int> Ns{2, 4, 8};
  std::vector<int> Ks{1};
  std::vector<int> steps{100, 200};
  std::vector<double> times{0.1, 0.5, 1.0};
  double x = 0.5;
  int threads = 1;
  std::string input;

  SolverConfig solver() const {
    SolverConfig s;
    s.degree = N;
    s.slabs = K;
    s.modes = M;
    s.gamma = gamma;
    s.mode = parse_solve_mode(mode);
    s.coupling = parse_coupling(coupling);
    s.fp_tol = fp_tol;
    s.fp_max_iter = fp_max_iter;
    s.auto_refine = !no_refine;
    return s;
  }

  ConfigEcho echo(std::vector<std::string> notes = {}) const {
    return ConfigEcho{subcommand, problem, solver(), T, std::move(notes)};
  }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HeatProblem make_problem(const RunConfig& rc) {
  if (rc.problem == "benchmark") return build_paper_example(rc.M, rc.T);
  if (rc.problem == "zero") return build_zero_problem(rc.M, rc.T);
  if (rc.problem == "pure_decay") return build_pure_decay(rc.M, rc.T);
  if (rc.problem == "manufactured") return build_manufactured_flux_problem(rc.M, rc.T);
  throw ConfigError("unknown problem '" + rc.problem + "'");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write failed for '" + path + "'");
}

std::string report_text(const RunConfig& rc, const ErrorReport& rep, const std::vector<std::string>& notes) {
  if (rc.format == "structured") return error_report_json(rep, rc.echo(notes));
  std::ostringstream os;
  write_error_csv(os, rep, notes);
  return os.str();
}

std::string study_text(const RunConfig& rc, const StudyResult& res, const std::vector<std::string>& notes) {
  if (rc.format == "structured") return study_json(res, rc.echo(notes));
  std::ostringstream os;
  write_study_csv(os, res, notes);
  return os.str();
}

void add_solver_flags(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--N", rc.N, "collocation degree per slab")->check(CLI::PositiveNumber);
  sub->add_option("--K", rc.K, "number of time slabs")->check(CLI::PositiveNumber);
  sub->add_option("--gamma", rc.gamma, "fractional-power exponent for diagnostics, in [0, 1)");
  sub->add_option("--mode", rc.mode, "stage solver")->check(CLI::IsMember({"direct", "picard"}));
  sub->add_option("--coupling", rc.coupling, "Robin product treatment")
      ->check(CLI::IsMember({"exact_multiplier", "interpolated_product"}));
  sub->add_option("--fp-tol", rc.fp_tol, "fixed-point tolerance");
  sub->add_option("--fp-max-iter", rc.fp_max_iter, "fixed-point iteration limit");
  sub->add_flag("--no-refine", rc.no_refine, "fail instead of doubling K when a slab is too long");
}

void add_common_flags(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--M", rc.M, "number of eigenmodes")->check(CLI::PositiveNumber);
  sub->add_option("--T", rc.T, "final time")->check(CLI::PositiveNumber);
  sub->add_option("--out", rc.out, "output path (default stdout)");
  sub->add_option("--format", rc.format, "output format")->check(CLI::IsMember({"csv", "structured"}));
}

int cmd_tables(RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.table_n != 2 && rc.table_n != 4 && rc.table_n != 8) {
    throw ConfigError("tables: n must be 2, 4 or 8");
  }
  rc.problem = "benchmark";
  rc.N = rc.table_n;
  rc.K = 1;
  const HeatProblem hp = make_problem(rc);
  const SolutionTrace tr = march(hp.problem, rc.solver());
  const ErrorReport rep = compute_errors(tr, hp);
  std::vector<std::string> notes{
      "table n=" + std::to_string(rc.table_n) + " run as K=1 slab, N=" + std::to_string(rc.N) +
          " CGL nodes on [0, T]; rows are the non-initial collocation times",
      "compare maxima, not abscissae: reference tables list Chebyshev-Gauss points",
      "M=" + std::to_string(rc.M) + " coupling=" + rc.coupling};
  emit(rc.out, report_text(rc, rep, notes), out);
  err << "max eps1 " << format_double(rep.max_eps1()) << "  max eps2 " << format_double(rep.max_eps2()) << '\n';
  return kOk;
}

int cmd_solve(RunConfig& rc, std::ostream& out, std::ostream& err) {
  const HeatProblem hp = make_problem(rc);
  const SolutionTrace tr = march(hp.problem, rc.solver());
  std::string text;
  if (rc.format == "structured") {
    text = solution_json(tr, rc.echo());
  } else {
    std::ostringstream os;
    write_solution_csv(os, tr);
    text = os.str();
  }
  emit(rc.out, text, out);
  if (tr.refinements > 0) {
    err << "note: K doubled " << tr.refinements << " time(s) to " << tr.config.slabs << '\n';
  }
  if (hp.has_exact()) {
    const ErrorReport rep = compute_errors(tr, hp);
    if (!rc.report.empty()) emit(rc.report, report_text(rc, rep, {}), out);
    err << "max eps1 " << format_double(rep.max_eps1()) << "  max eps2 " << format_double(rep.max_eps2()) << '\n';
  }
  return kOk;
}

int cmd_convergence(RunConfig& rc, std::ostream& out, std::ostream& err) {
  const HeatProblem hp = make_problem(rc);
  const SolverConfig base = rc.solver();
  base.validate();
  const StudyResult res = run_convergence_study(hp, rc.Ns, rc.Ks, base, rc.threads);
  emit(rc.out, study_text(rc, res, {"problem=" + rc.problem}), out);
  for (const auto& r : res.rows) {
    if (!r.ok()) err << "N=" << r.N << " K=" << r.K << ": " << r.status << '\n';
  }
  return kOk;
}

int cmd_baseline(RunConfig& rc, std::ostream& out, std::ostream&) {
  const HeatProblem hp = make_problem(rc);
  for (int s : rc.steps) {
    if (s < 1) throw ConfigError("baseline: step counts must be >= 1");
  }
  const StudyResult res = run_baseline_study(hp, rc.steps);
  emit(rc.out, study_text(rc, res, {"backward Euler rows: N=0, K=time steps"}), out);
  return kOk;
}

int cmd_kernels(RunConfig& rc, std::ostream& out, std::ostream&) {
  const KernelSeries ks(EigenBasis::heat_robin(rc.M));
  std::vector<KernelRow> rows;
  for (double t : rc.times) {
    if (!(t > 0.0)) throw ConfigError("kernels: t must be > 0");
    rows.push_back({t, ks.K(t), ks.K1(t, rc.x), rc.x});
  }
  if (rc.format == "structured") {
    emit(rc.out, kernel_json(rows, ks.tail_bound(), rc.echo()), out);
  } else {
    std::ostringstream os;
    write_kernel_csv(os, rows, ks.tail_bound());
    emit(rc.out, os.str(), out);
  }
  return kOk;
}

int cmd_inspect(RunConfig& rc, std::ostream& out, std::ostream&) {
  std::ifstream f(rc.input, std::ios::binary);
  if (!f) throw IoError("cannot open '" + rc.input + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  ParsedDocument doc;
  try {
    doc = parse_document(buf.str());
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  out << "kind " << doc.kind << "\nsubcommand " << doc.config.subcommand << "\nN " << doc.config.solver.degree
      << "\nK " << doc.config.solver.slabs << "\nM " << doc.config.solver.modes << "\nmode "
      << to_string(doc.config.solver.mode) << '\n';
  if (doc.kind == "error_report") {
    out << "rows " << doc.report.rows.size() << "\nmax_eps1 " << format_double(doc.report.max_eps1()) << '\n';
  } else if (doc.kind == "study") {
    out << "rows " << doc.study.rows.size() << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Duhamel-collocation solver for evolution equations with time-dependent Robin conditions",
               "duhamel"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* tables = app.add_subcommand("tables", "reproduce the heat-example error tables");
  tables->add_option("--n", rc.table_n, "table size: 2, 4 or 8")->required();
  add_common_flags(tables, rc);
  add_solver_flags(tables, rc);

  auto* solve = app.add_subcommand("solve", "single solve; writes mode coefficients per node");
  solve->add_option("--problem", rc.problem, "benchmark | manufactured | pure_decay | zero");
  solve->add_option("--report", rc.report, "error report path (exact solution required)");
  add_common_flags(solve, rc);
  add_solver_flags(solve, rc);

  auto* conv = app.add_subcommand("convergence", "error study over N and K");
  conv->add_option("--problem", rc.problem, "benchmark | manufactured | pure_decay | zero");
  conv->add_option("--Ns", rc.Ns, "degrees")->delimiter(',');
  conv->add_option("--Ks", rc.Ks, "slab counts")->delimiter(',');
  conv->add_option("--threads", rc.threads, "concurrent cells");
  add_common_flags(conv, rc);
  add_solver_flags(conv, rc);

  auto* base = app.add_subcommand("baseline", "backward Euler reference");
  base->add_option("--problem", rc.problem, "benchmark | manufactured | pure_decay | zero");
  base->add_option("--steps", rc.steps, "time-step counts")->delimiter(',');
  add_common_flags(base, rc);

  auto* kern = app.add_subcommand("kernels", "tabulate K(t) and K1(t, x)");
  kern->add_option("--t", rc.times, "times > 0")->delimiter(',');
  kern->add_option("--x", rc.x, "position for K1")->check(CLI::Range(0.0, 1.0));
  add_common_flags(kern, rc);

  auto* inspect = app.add_subcommand("inspect", "re-read a structured document");
  inspect->add_option("file", rc.input, "document path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  for (auto* sub : app.get_subcommands()) rc.subcommand = sub->get_name();

  try {
    rc.solver().validate();
    if (rc.subcommand == "tables") return cmd_tables(rc, out, err);
    if (rc.subcommand == "solve") return cmd_solve(rc, out, err);
    if (rc.subcommand == "convergence") return cmd_convergence(rc, out, err);
    if (rc.subcommand == "baseline") return cmd_baseline(rc, out, err);
    if (rc.subcommand == "kernels") return cmd_kernels(rc, out, err);
    if (rc.subcommand == "inspect") return cmd_inspect(rc, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  }
  return kConfigError;
}

}  // namespace duhamel::cli
