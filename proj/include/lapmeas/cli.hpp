#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lapmeas::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kInvalidInput = 2,
  kResourceGuard = 3,
  kVerificationFailed = 4,
};

// Runs one CLI invocation; `args` excludes the program name. Normal output
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lapmeas::cli
