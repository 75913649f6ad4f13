#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fair::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kInfeasible = 3,
  kInternalError = 4,
};

/// Runs one invocation (`args` excludes the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fair::cli
