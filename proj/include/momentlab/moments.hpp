#pragma once

#include "momentlab/entry_law.hpp"
#include "momentlab/walk.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

enum class EnsembleKind { Wigner, Dilute };

// Raw moments of the unscaled entries plus the normalization rule. The matrix
// entry is a/sqrt(n) (Wigner) or a b/sqrt(c) with b ~ Bernoulli(c/n) (dilute).
struct MomentSpec {
  EnsembleKind kind = EnsembleKind::Wigner;
  std::string descriptor;
  std::vector<long double> off;             // off[m] = E a^{2m}, off[0] = 1
  std::vector<long double> diag;
  std::optional<std::vector<Rational>> off_exact;
  std::optional<std::vector<Rational>> diag_exact;
  double c = 0.0;              // dilute concentration
  bool dilute_diagonal = true;

  int max_order() const { return 2 * (static_cast<int>(std::min(off.size(), diag.size())) - 1); }
  bool has_exact() const { return off_exact && diag_exact; }

  // E[(matrix entry)^M] for an entry passed M times, loop = diagonal.
  long double edge_moment(int M, bool loop, long n) const;
  Rational edge_moment_exact(int M, bool loop, long n) const;
};

// Wigner spec; goe_diagonal doubles the diagonal variance (Gaussian diagonal).
MomentSpec wigner_spec(const EntryLaw& law, int max_s, bool goe_diagonal = false);
// Entries replaced by 0 when |a| > U.
MomentSpec truncated_spec(const EntryLaw& law, long double U, int max_s);
MomentSpec dilute_spec(const EntryLaw& law, double c, int max_s, bool dilute_diagonal = true);
// GOE: Gaussian off-diagonal entries of variance v^2, diagonal variance 2 v^2.
inline MomentSpec goe_spec(double v, int max_s) { return wigner_spec(EntryLaw::gaussian(v), max_s, true); }

struct TruncationSpec {
  EntryLaw base;
  double eta = 6.0;
  double delta = 0.01;
  long double level(long n) const;  // U_n = n^{1/eta - delta}
};

std::vector<long double> truncated_moments(const TruncationSpec& t, long n, int max_m);

long double semicircle_moment(int l, long double v);
Rational semicircle_moment_exact(int l, const Rational& v2);

// Walks grouped by what the moment sum needs: the frame pass profile, |V|, D(g).
struct WalkClassKey {
  std::vector<std::pair<int, bool>> edges;  // sorted (passes, loop)
  int vertices = 0;
  int max_exit_degree = 0;
  auto operator<=>(const WalkClassKey&) const = default;
  int max_passes() const;
  int nu_norm(int s) const { return s + 1 - vertices; }
};

struct MomentCensus {
  int s = 0;
  std::map<WalkClassKey, long long> classes;
  long long walks = 0;
};

MomentCensus moment_census(int s, int ceiling = kWalkCeiling);

struct ZParts {
  long double z[4] = {0, 0, 0, 0};
  std::optional<Rational> z_exact[4];
  long long walks[4] = {0, 0, 0, 0};
  double C0 = 0.0;
  double delta = 0.0;
  double threshold = 0.0;   // C0 s^2 / n
  double degree_split = 0.0;  // n^delta
};

struct MomentResult {
  long n = 0;
  int s = 0;
  std::string spec;
  long double total = 0.0L;
  std::optional<Rational> total_exact;
  std::map<int, long double> by_nu_norm;  // contribution per |nu|_1 = s + 1 - |V|
  std::optional<ZParts> zparts;
};

// E Tr A^{2s} as a weighted walk sum.
MomentResult exact_trace_moment(long n, int s, const MomentSpec& spec, int ceiling = kWalkCeiling);
MomentResult exact_trace_moment(long n, const MomentCensus& census, const MomentSpec& spec);

inline constexpr double kC1 = 2.0 * 2.718281828459045235360287;  // sup 2k/(k!)^{1/k}, approached as k grows
double default_C0(const MomentSpec& spec);  // e (1 + 8 C1^2 V_12)

// Splits the walk sum into Z1..Z4 with threshold C0 s^2/n on |nu|_1 (Z4 above it),
// then by the presence of an edge passed more than twice (Z1 without one), then
// by D(g) <= n^delta (Z2) versus D(g) > n^delta (Z3).
MomentResult z_decomposition(long n, int s, const MomentSpec& spec, double C0, double delta,
                             int ceiling = kWalkCeiling);
MomentResult z_decomposition(long n, const MomentCensus& census, const MomentSpec& spec, double C0, double delta);

// Lower bound n m_{2s} (1 + (s-3) V_4 / c) for the dilute moment.
long double dilute_lower_bound(long n, int s, double v, long double V4, double c);
Rational dilute_lower_bound_exact(long n, int s, const Rational& v2, const Rational& V4, const Rational& c);

struct WeightCheck {
  bool pass = true;
  long double weight = 0.0L;
  long double bound = 0.0L;
  long double slack = 0.0L;  // bound / weight
};

// Walk weight prod E a^{M} (unscaled, truncated entries) against
// 4^{-s} prod_k (4 V (2U)^{2(k-2)})^{nu_k} with V = max(1, V_12).
WeightCheck weight_bound_check(const WalkAnalysis& a, const EntryLaw& law, long double U);

nlohmann::json to_json(const MomentResult& r);

}  // namespace momentlab
