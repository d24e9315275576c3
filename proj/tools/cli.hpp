#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphbayes::cli {

/// Exit codes: 0 success, 1 parse/config/I-O error, 2 inconsistent exact
/// constraints.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInconsistent = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphbayes::cli
