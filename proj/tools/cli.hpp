#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace progvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `progvar` command line. `args` excludes the program name.
/// Report output goes to `out` unless --output names a file.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace progvar::cli
