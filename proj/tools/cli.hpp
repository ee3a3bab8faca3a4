#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entmom::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "ENTMOM_WORKERS";

/// Runs the tool on `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.17g" rendering used for every number in CSV and text output.
std::string format_number(double v);

}  // namespace entmom::cli
