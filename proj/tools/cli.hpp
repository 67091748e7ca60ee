#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sspucb::cli {

/// Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sspucb::cli
