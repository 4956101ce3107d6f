#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noma::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kUsageError = 2,
  kNonConvergence = 3,
  kIoError = 4,
};

/// Parses `args` (without the program name) and runs the chosen subcommand.
/// Data goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noma::cli
