#pragma once

#include <string>
#include <vector>

namespace qdistill {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;           // bad flags or config values
inline constexpr int kExitBadState = 2;        // unreadable/invalid state file
inline constexpr int kExitNumeric = 3;         // internal numeric failure
inline constexpr int kExitNotDistillable = 4;  // separable input to distill/simulate
inline constexpr int kExitTargetUnreachable = 5;

// Runs one CLI invocation; args excludes the program name, e.g.
// {"analyze", "--werner", "0.75"}.  Never throws.
int run_cli(const std::vector<std::string>& args);

}  // namespace qdistill
