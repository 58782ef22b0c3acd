#pragma once

#include "momentlab/walk.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

// Count vectors indexed by degree are kept without trailing zeros so that
// signatures compare structurally.
std::vector<int> trim_counts(std::vector<int> v);

struct NuSignature {
  DyckPath theta;
  std::vector<int> nu;  // nu[k] for k >= 2; entries 0 and 1 unused
  int r = 0;
  int p = 0;
  int d = 0;

  int s() const { return theta.half_length(); }
  int nu_k(int k) const { return k < static_cast<int>(nu.size()) ? nu[k] : 0; }
  auto operator<=>(const NuSignature&) const = default;
};

struct MuSignature {
  DyckPath theta;
  std::vector<int> mu;  // mu[m] for m >= 1
  int p_prime = 0;
  int p_double = 0;
  std::vector<int> q;   // q[j-1] = Q_j
  int r = 0;
  int d = 0;
  int k0 = 0;
  bool within_k0 = true;  // sup kappa_nu <= k0

  int s() const { return theta.half_length(); }
  int mu_m(int m) const { return m < static_cast<int>(mu.size()) ? mu[m] : 0; }
  int mu_norm() const;  // sum_{m>=2} (m-1) mu_m
  auto operator<=>(const MuSignature&) const = default;
};

NuSignature classify_nu(const WalkAnalysis& a);
MuSignature classify_mu(const WalkAnalysis& a, int k0);

struct PsiValue {
  BigCount exact;
  Rational bound;
};

// Partitions of s labelled instants into nu_k blocks of size k (k >= 2), plus
// N instants reserved for the root when N > 0. nu is indexed by k.
// Throws std::domain_error when N + sum k nu_k > s.
PsiValue psi_bound(int s, const std::vector<int>& nu, int N = 0);

// Right side of the Sinai-Soshnikov class bound with Upsilon_k = (2k)^k for
// k >= 3, 3^r on open simple self-intersections and 1 on the rest.
Rational ss_bound(const NuSignature& sig, int H);
inline Rational ss_bound(const NuSignature& sig) { return ss_bound(sig, sig.theta.max_height()); }

// prod_k (s^k (2k)^k / k!)^{nu_k} / nu_k!: the theta-independent count of
// instant choices times the vertex-assignment factor, ignoring r, p and d.
Rational upsilon_bound(const NuSignature& sig);

class BoundNotApplicable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Empty string when the bound may be claimed, else the violated precondition.
std::string mu_bound_refusal(const MuSignature& sig);
// Evaluates the right side of Lemma 3.1 without checking its preconditions.
// Throws std::domain_error only when r > mu_2 (a negative factorial).
Rational mu_bound_formula(const MuSignature& sig, int H);
// Lemma 3.1 bound; throws BoundNotApplicable outside its preconditions.
Rational mu_bound(const MuSignature& sig, int H);
inline Rational mu_bound(const MuSignature& sig) { return mu_bound(sig, sig.theta.max_height()); }

struct ClassCensus {
  int s = 0;
  int k0 = 0;
  BigCount total = 0;
  std::map<NuSignature, BigCount> nu_classes;
  std::map<MuSignature, BigCount> mu_classes;
};

ClassCensus class_census(int s, int k0, bool allow_loops = true, int ceiling = kWalkCeiling);

BigCount exact_class_size(const ClassCensus& census, const NuSignature& sig);
BigCount exact_class_size(const ClassCensus& census, const MuSignature& sig);
BigCount exact_class_size(int s, const NuSignature& sig, int ceiling = kWalkCeiling);
BigCount exact_class_size(int s, const MuSignature& sig, int ceiling = kWalkCeiling);

std::string describe(const NuSignature& sig);
std::string describe(const MuSignature& sig);

// One row per realized signature: fields, exact size, bound, slack = bound / exact.
void write_census_csv(std::ostream& out, const ClassCensus& census);

}  // namespace momentlab
