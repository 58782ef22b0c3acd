#pragma once

#include <map>
#include <ostream>
#include <string>

namespace momentlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parsed command line: the subcommand plus every parameter that can change results.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;
  std::string canonical() const;    // "subcommand;key=value;..." with sorted keys
  std::string fingerprint() const;  // 16 hex digits of SHA-256(canonical())
};

std::string version();

// Full command-line entry point. Results go to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace momentlab::cli
