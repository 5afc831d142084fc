#pragma once

#include <iosfwd>

namespace frx {

/// Exit codes of the `frx` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCap = 4;

/// Runs one `frx` invocation, writing reports to `out` and diagnostics to
/// `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frx
