#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvindex {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;        // verification failure or method disagreement
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNotConverged = 3;

/// Runs the command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvindex
