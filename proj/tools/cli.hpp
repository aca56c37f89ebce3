#pragma once

// Command-line front end: optimize, sweep, simulate, verify.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
// failure. Every report carries the tool version and the resolved
// configuration (seed included), and reruns are byte-identical.

#include <iosfwd>
#include <string>
#include <vector>

namespace spinframe::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

inline constexpr int kMaxSimulateSpins = 10;

/// Parse `args` (without the program name) and run one subcommand. Reports
/// go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinframe::cli
