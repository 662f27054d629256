#pragma once

#include <iosfwd>

namespace leadsel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Entry point shared by the executable and the tests. Subcommands:
/// generate, select, rate, simulate, sweep.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace leadsel::cli
