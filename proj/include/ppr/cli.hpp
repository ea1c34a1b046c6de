#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppr::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kIo = 3,
  kNumerical = 4,
};

/// Runs the command line (args excludes the program name) and returns the
/// process exit code. All output goes to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppr::cli
