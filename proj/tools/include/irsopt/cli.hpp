#pragma once

#include <iosfwd>

namespace irsopt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime error or failed oracle
inline constexpr int kExitUsage = 2;    // bad arguments or configuration

/// Entry point of the `irsopt` tool. Subcommands: run, sweep, oracle-check,
/// convergence, validate-config.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irsopt::cli
