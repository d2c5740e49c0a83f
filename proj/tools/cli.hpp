#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace duhamel::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

/// Parses and runs one command line; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace duhamel::cli
