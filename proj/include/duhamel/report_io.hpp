#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "duhamel/harness.hpp"

namespace duhamel {

/// Shortest locale-independent scientific form with 17 significant digits.
std::string format_double(double v);

/// Run parameters echoed into every structured document.
struct ConfigEcho {
  std::string subcommand;
  std::string problem;
  SolverConfig solver;
  double final_time = 1.0;
  std::vector<std::string> notes;
};

/// "t,eps1,eps2", preceded by '# ' comment lines for each note.
void write_error_csv(std::ostream& os, const ErrorReport& rep, const std::vector<std::string>& notes = {});
/// "N,K,M,max_eps1,max_eps2,wall_time_s"; failed cells carry nan and a comment.
void write_study_csv(std::ostream& os, const StudyResult& res, const std::vector<std::string>& notes = {});
/// "slab,k,t,trace,y,c_1,...,c_M": mode coefficients at every node.
void write_solution_csv(std::ostream& os, const SolutionTrace& trace);

struct KernelRow {
  double t = 0.0;
  double K = 0.0;
  double K1 = 0.0;  // at x
  double x = 0.5;
};
/// "t,K,K1,x"
void write_kernel_csv(std::ostream& os, const std::vector<KernelRow>& rows, double tail_bound);

std::string error_report_json(const ErrorReport& rep, const ConfigEcho& cfg);
std::string study_json(const StudyResult& res, const ConfigEcho& cfg);
std::string solution_json(const SolutionTrace& trace, const ConfigEcho& cfg);
std::string kernel_json(const std::vector<KernelRow>& rows, double tail_bound, const ConfigEcho& cfg);

struct ParsedDocument {
  std::string kind;  // error_report | study | solution | kernels
  ConfigEcho config;
  ErrorReport report;
  StudyResult study;
};

/// Inverse of the *_json writers for error reports and studies (config and
/// rows). Throws std::runtime_error on malformed input.
ParsedDocument parse_document(const std::string& text);

}  // namespace duhamel
