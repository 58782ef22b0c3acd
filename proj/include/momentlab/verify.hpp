#pragma once

#include "momentlab/moments.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

struct SuiteOptions {
  int max_halfsteps = 12;  // caps every s used by the enumeration suites
  std::uint64_t seed = 20240917;
  int threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 13;

// Criteria run by the verify subcommand; the rest need Monte Carlo time.
std::vector<int> verify_criteria();
std::string criterion_name(int id);
CriterionResult run_criterion(int id, const SuiteOptions& opt);

// Sum over all n^{2s} index tuples of prod E(entry products). Exponential; n <= 4, 2s <= 8 in practice.
struct BruteForceMoment {
  long double value = 0.0L;
  std::optional<Rational> exact;
};
BruteForceMoment brute_force_trace_moment(long n, int s, const MomentSpec& spec);

// Golden tables: small exact tables whose drift would signal a regression.
std::map<std::string, std::string> golden_tables();

struct GoldenReport {
  bool pass = true;
  std::vector<std::string> missing;
  std::vector<std::string> mismatched;
  std::vector<std::string> written;
};

GoldenReport check_golden(const std::filesystem::path& dir, bool bless);

std::filesystem::path default_golden_dir();

}  // namespace momentlab
