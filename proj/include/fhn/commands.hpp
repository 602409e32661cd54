#pragma once

#include <ostream>

namespace fhn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the fhnsync tool. Subcommands:
///   constants        theory constants and threshold verdict for a config
///   simulate         run a config, write metrics CSV (+ snapshots)
///   verify           oracle suite; exit 1 on any failure
///   reproduce-paper  the published 32x32 example end to end
///   plot             SVG line chart from an existing CSV
/// Regular output goes to `out`, diagnostics only to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fhn::cli
