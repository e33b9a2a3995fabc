#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ifsq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the laboratory CLI. `args` excludes the program name. Results go to
/// `out` (or the --out file), diagnostics to `err`. Output files are only
/// written once the command has fully succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifsq::cli
