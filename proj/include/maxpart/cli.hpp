#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxpart::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kNoConvergence = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kUsage = 64;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxpart::cli
