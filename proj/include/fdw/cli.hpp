#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdw {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the fdw tool. `args` excludes the program name. Data goes
/// to `out`, diagnostics to `err`; library warnings still use the warning sink.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdw
