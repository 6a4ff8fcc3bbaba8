#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covgeo::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kSingularMetric = 3,
  kInvalidConfig = 4,
};

/// Runs one command line (without the program name). JSON and CSV go to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covgeo::cli
