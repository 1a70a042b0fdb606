#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlx::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kUsageError = 2,
};

/// Runs `mlx <args...>`; args excludes the program name. Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "start:stop:step" into the inclusive grid start, start + step, ...
/// A single number yields one value. Throws ParameterError on bad input.
std::vector<double> parse_range(const std::string& text);

}  // namespace mlx::cli
