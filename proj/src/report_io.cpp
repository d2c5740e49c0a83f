#include "duhamel/report_io.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

namespace duhamel {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

namespace {

void write_notes(std::ostream& os, const std::vector<std::string>& notes) {
  for (const auto& n : notes) os << "# " << n << '\n';
}

json config_json(const ConfigEcho& c) {
  return json{{"subcommand", c.subcommand},
              {"problem", c.problem},
              {"N", c.solver.degree},
              {"K", c.solver.slabs},
              {"M", c.solver.modes},
              {"T", c.final_time},
              {"gamma", c.solver.gamma},
              {"mode", to_string(c.solver.mode)},
              {"fp_tol", c.solver.fp_tol},
              {"fp_max_iter", c.solver.fp_max_iter},
              {"coupling", to_string(c.solver.coupling)},
              {"auto_refine", c.solver.auto_refine},
              {"notes", c.notes}};
}

ConfigEcho config_from_json(const json& j) {
  ConfigEcho c;
  c.subcommand = j.at("subcommand").get<std::string>();
  c.problem = j.at("problem").get<std::string>();
  c.solver.degree = j.at("N").get<int>();
  c.solver.slabs = j.at("K").get<int>();
  c.solver.modes = j.at("M").get<std::size_t>();
  c.final_time = j.at("T").get<double>();
  c.solver.gamma = j.at("gamma").get<double>();
  c.solver.mode = parse_solve_mode(j.at("mode").get<std::string>());
  c.solver.fp_tol = j.at("fp_tol").get<double>();
  c.solver.fp_max_iter = j.at("fp_max_iter").get<int>();
  c.solver.coupling = parse_coupling(j.at("coupling").get<std::string>());
  c.solver.auto_refine = j.at("auto_refine").get<bool>();
  c.notes = j.at("notes").get<std::vector<std::string>>();
  return c;
}

json envelope(const std::string& kind, const ConfigEcho& cfg) {
  return json{{"format", "duhamel-report"}, {"version", 1}, {"kind", kind}, {"config", config_json(cfg)}};
}

// NaN is not representable in JSON; failed cells store null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

void write_error_csv(std::ostream& os, const ErrorReport& rep, const std::vector<std::string>& notes) {
  write_notes(os, notes);
  os << "t,eps1,eps2\n";
  for (const auto& r : rep.rows) os << format_double(r.t) << ',' << format_double(r.eps1) << ',' << format_double(r.eps2) << '\n';
}

void write_study_csv(std::ostream& os, const StudyResult& res, const std::vector<std::string>& notes) {
  write_notes(os, notes);
  for (const auto& r : res.rows) {
    if (!r.ok()) os << "# N=" << r.N << " K=" << r.K << " failed: " << r.status << '\n';
  }
  os << "N,K,M,max_eps1,max_eps2,wall_time_s\n";
  for (const auto& r : res.rows) {
    const double nan = std::nan("");
    os << r.N << ',' << r.K << ',' << r.M << ',' << format_double(r.ok() ? r.max_eps1 : nan) << ','
       << format_double(r.ok() ? r.max_eps2 : nan) << ',' << format_double(r.wall_time_s) << '\n';
  }
}

void write_solution_csv(std::ostream& os, const SolutionTrace& trace) {
  const std::size_t m = trace.stages.empty() ? 0 : trace.stages.front().x.front().size();
  os << "slab,k,t,trace,y";
  for (std::size_t n = 1; n <= m; ++n) os << ",c_" << n;
  os << '\n';
  for (const auto& st : trace.stages) {
    for (std::size_t k = 0; k < st.x.size(); ++k) {
      os << st.slab << ',' << k << ',' << format_double(st.times[k]) << ',' << format_double(st.trace[k]) << ','
         << format_double(st.y[k]);
      for (double c : st.x[k]) os << ',' << format_double(c);
      os << '\n';
    }
  }
}

void write_kernel_csv(std::ostream& os, const std::vector<KernelRow>& rows, double tail_bound) {
  os << "# integrated tail bound " << format_double(tail_bound) << '\n';
  os << "t,K,K1,x\n";
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.K) << ',' << format_double(r.K1) << ',' << format_double(r.x) << '\n';
  }
}

std::string error_report_json(const ErrorReport& rep, const ConfigEcho& cfg) {
  json j = envelope("error_report", cfg);
  j["method"] = rep.method;
  j["N"] = rep.N;
  j["K"] = rep.K;
  j["M"] = rep.M;
  j["max_eps1"] = rep.max_eps1();
  j["max_eps2"] = rep.max_eps2();
  j["initial"] = {rep.initial.t, rep.initial.eps1, rep.initial.eps2};
  j["columns"] = {"t", "eps1", "eps2"};
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back({r.t, r.eps1, r.eps2});
  j["rows"] = std::move(rows);
  return j.dump(2);
}

std::string study_json(const StudyResult& res, const ConfigEcho& cfg) {
  json j = envelope("study", cfg);
  j["method"] = res.method;
  j["columns"] = {"N", "K", "M", "max_eps1", "max_eps2", "wall_time_s", "status"};
  json rows = json::array();
  for (const auto& r : res.rows) {
    rows.push_back({r.N, r.K, r.M, num(r.max_eps1), num(r.max_eps2), num(r.wall_time_s), r.status});
  }
  j["rows"] = std::move(rows);
  try {
    const RateSummary rs = fit_rates(res);
    json rates = json::object();
    if (rs.spectral_slope) rates["spectral_slope_ln"] = *rs.spectral_slope;
    if (rs.spectral_slope_log10) rates["spectral_slope_log10"] = *rs.spectral_slope_log10;
    if (rs.algebraic_order) rates["algebraic_order"] = *rs.algebraic_order;
    j["rates"] = std::move(rates);
  } catch (const std::invalid_argument&) {
    j["rates"] = nullptr;
  }
  return j.dump(2);
}

std::string solution_json(const SolutionTrace& trace, const ConfigEcho& cfg) {
  json j = envelope("solution", cfg);
  j["refinements"] = trace.refinements;
  j["effective_K"] = trace.config.slabs;
  j["contraction"] = trace.contraction;
  json stages = json::array();
  for (const auto& st : trace.stages) {
    json nodes = json::array();
    for (std::size_t k = 0; k < st.x.size(); ++k) {
      nodes.push_back({{"k", k}, {"t", st.times[k]}, {"trace", st.trace[k]}, {"y", st.y[k]}, {"x", st.x[k].coefficients()}});
    }
    json s{{"slab", st.slab}, {"nodes", std::move(nodes)}};
    if (st.history) {
      s["fixed_point"] = {{"iterations", st.history->iterations},
                          {"differences", st.history->differences},
                          {"contraction_estimate", st.history->contraction_estimate}};
    }
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  return j.dump(2);
}

std::string kernel_json(const std::vector<KernelRow>& rows, double tail_bound, const ConfigEcho& cfg) {
  json j = envelope("kernels", cfg);
  j["tail_bound"] = tail_bound;
  j["columns"] = {"t", "K", "K1", "x"};
  json out = json::array();
  for (const auto& r : rows) out.push_back({r.t, r.K, r.K1, r.x});
  j["rows"] = std::move(out);
  return j.dump(2);
}

ParsedDocument parse_document(const std::string& text) {
  ParsedDocument doc;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "duhamel-report") throw std::runtime_error("not a duhamel report");
    doc.kind = j.at("kind").get<std::string>();
    doc.config = config_from_json(j.at("config"));
    if (doc.kind == "error_report") {
      doc.report.method = j.at("method").get<std::string>();
      doc.report.N = j.at("N").get<int>();
      doc.report.K = j.at("K").get<int>();
      doc.report.M = j.at("M").get<std::size_t>();
      const auto& ini = j.at("initial");
      doc.report.initial = {ini.at(0).get<double>(), ini.at(1).get<double>(), ini.at(2).get<double>()};
      for (const auto& r : j.at("rows")) doc.report.rows.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()});
    } else if (doc.kind == "study") {
      doc.study.method = j.at("method").get<std::string>();
      for (const auto& r : j.at("rows")) {
        StudyRow row;
        row.N = r.at(0).get<int>();
        row.K = r.at(1).get<int>();
        row.M = r.at(2).get<std::size_t>();
        row.max_eps1 = num_from(r.at(3));
        row.max_eps2 = num_from(r.at(4));
        row.wall_time_s = num_from(r.at(5));
        row.status = r.at(6).get<std::string>();
        doc.study.rows.push_back(row);
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  return doc;
}

}  // namespace duhamel
