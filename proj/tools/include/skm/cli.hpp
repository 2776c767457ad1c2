#pragma once

#include <ostream>

namespace skm::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Data tables and JSON go to `out` unless an --out/--json/--metrics path is
/// given; summaries, timings and errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace skm::cli
