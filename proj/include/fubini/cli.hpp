#pragma once

#include <iosfwd>

namespace fubini::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Parses flags (and an optional --config JSON file, overridden by flags), runs
// the experiment and writes the report to --output or to `out`. The per-check
// table goes to `log`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace fubini::cli
