#pragma once

#include "momentlab/entry_law.hpp"

#include <Eigen/Dense>

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace momentlab {

struct EnsembleConfig {
  long n = 0;
  EntryLaw law;
  bool goe = false;                   // Gaussian diagonal of variance 2 v^2
  std::optional<double> trunc_delta;  // truncate at U_n = n^{1/eta - delta}
  double trunc_eta = 6.0;
  std::optional<double> c;            // dilution concentration
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;  // throws std::invalid_argument
  long double truncation_level() const;
  // Stable text form; threads are excluded since they never change results.
  std::string canonical() const;
  std::string fingerprint() const;  // first 16 hex digits of SHA-256(canonical())
};

// First `hex_digits` hex digits of SHA-256(text).
std::string sha256_hex(const std::string& text, int hex_digits = 64);

// Counter layout: {entry index i*n+j, replicate low word, stream, replicate high word}.
enum class Stream : std::uint32_t { Value = 0, Mask = 1 };

// Unscaled draw a_ij, after truncation. Used by sample_matrix and the truncation diagnostics.
double draw_entry(const EnsembleConfig& cfg, std::uint64_t replicate, long i, long j);

Eigen::MatrixXd sample_matrix(const EnsembleConfig& cfg, std::uint64_t replicate);

struct SpectralRow {
  bool ok = true;
  double lambda_max = 0.0;
  std::vector<long double> traces;  // Tr A^{2s} for each requested s
  double residual = 0.0;            // ||Av - lambda v|| / ||A|| at the extremal pair, if checked
};

SpectralRow spectral_stats(const Eigen::MatrixXd& a, const std::vector<int>& s_list, bool check_residual = false);
// Tr A^{2s} by repeated multiplication; the cross-check for spectral_stats.
long double trace_power_direct(const Eigen::MatrixXd& a, int s);

struct MeanCI {
  long count = 0;
  double mean = 0.0, variance = 0.0, se = 0.0, lo = 0.0, hi = 0.0;
};
struct Proportion {
  long hits = 0, count = 0;
  double p = 0.0, lo = 0.0, hi = 0.0;
};

double z_for(double confidence);
MeanCI mean_ci(const std::vector<double>& x, double confidence = 0.95);
Proportion wilson(long hits, long count, double confidence = 0.95);

struct SampleStats {
  std::string fingerprint;
  std::vector<int> s_list;
  long replicates = 0;
  long flagged = 0;  // replicates dropped after eigensolver failure
  std::vector<double> lambda_max;
  std::vector<std::vector<long double>> traces;  // [s index][replicate]
  MeanCI trace_mean(size_t k) const;             // of Tr A^{2s}
  MeanCI normalized_trace_mean(size_t k, long n) const;  // of (1/n) Tr A^{2s}
};

SampleStats run_replicates(const EnsembleConfig& cfg, long replicates, const std::vector<int>& s_list,
                           std::uint64_t first_replicate = 0);

// One row per replicate: replicate,lambda_max,tr_2s...; header carries the fingerprint.
void write_samples_csv(std::ostream& out, const SampleStats& st);

enum class TailScale { Wigner, Dilute };

struct TailPoint {
  double x = 0.0;
  double threshold = 0.0;
  Proportion exceed;
  std::optional<double> chebyshev;  // mean Tr A^{2s} / threshold^{2s}
};

struct TailCurve {
  std::string fingerprint;
  TailScale scale = TailScale::Wigner;
  long replicates = 0;
  int chebyshev_s = 0;
  std::vector<TailPoint> points;
  bool nonincreasing() const;  // within Wilson half-widths
};

TailCurve tail_curve(const EnsembleConfig& cfg, const std::vector<double>& x_grid, TailScale scale, long replicates,
                     int chebyshev_s = 0);

struct UniversalityReport {
  int s = 0;
  MeanCI a, b;
  double diff = 0.0, se = 0.0, z = 0.0;
  bool agree = true;  // |z| <= 3
};

UniversalityReport universality_compare(const EnsembleConfig& a, const EnsembleConfig& b, int s, long replicates);

struct TruncationReport {
  Proportion rate;
  double U = 0.0;
  double bound = 0.0;  // n^2 E|a|^{p} / U^{p}
  double p = 0.0;
  bool within = true;  // rate.lo <= bound
};

// Fraction of replicates where some |a_ij| (i <= j) exceeds U_n; p is the moment order in the bound.
TruncationReport truncation_event_rate(const EnsembleConfig& cfg, long replicates, double p);

nlohmann::json to_json(const MeanCI& m);
nlohmann::json to_json(const Proportion& p);
nlohmann::json to_json(const TailCurve& t);
nlohmann::json to_json(const UniversalityReport& u);
nlohmann::json to_json(const TruncationReport& t);

}  // namespace momentlab
