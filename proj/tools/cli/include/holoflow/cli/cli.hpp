#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holoflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args excludes the program name. CSV goes to --out
/// (or `out` when --out is absent), verdicts and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holoflow::cli
