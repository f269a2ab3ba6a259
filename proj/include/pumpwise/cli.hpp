#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pumpwise::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kInfeasible = 3,
  kSimRegression = 4,
};

/// Runs `pumpwise <args...>` (args excludes the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pumpwise::cli
