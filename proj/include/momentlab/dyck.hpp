#pragma once

#include "momentlab/bignum.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace momentlab {

inline constexpr int kDyckCeiling = 14;

class DyckPath {
 public:
  DyckPath() = default;
  // Throws std::invalid_argument unless steps is a balanced nonnegative ±1 sequence.
  explicit DyckPath(std::vector<int8_t> steps);

  int half_length() const { return static_cast<int>(steps_.size() / 2); }
  const std::vector<int8_t>& steps() const { return steps_; }
  // heights()[t] is the height after t steps; size 2k+1.
  std::vector<int> heights() const;
  int max_height() const;
  std::string str() const;  // e.g. "UUDD"

  auto operator<=>(const DyckPath&) const = default;

 private:
  std::vector<int8_t> steps_;
};

struct PlaneTree {
  // children[v] lists the children of v left to right; vertex 0 is the root.
  std::vector<std::vector<int>> children;

  int edge_count() const { return static_cast<int>(children.size()) - 1; }
  bool operator==(const PlaneTree&) const = default;
};

BigCount catalan(unsigned k);
// Catalan numbers from t_0 = 1, t_k = sum_j t_{k-1-j} t_j.
std::vector<BigCount> catalan_by_recurrence(unsigned kmax);

// Paths in lexicographic order of their step sequences (−1 < +1).
void for_each_dyck(int k, const std::function<void(const DyckPath&)>& fn, int ceiling = kDyckCeiling);
std::vector<DyckPath> enumerate_dyck(int k, int ceiling = kDyckCeiling);

PlaneTree dyck_to_tree(const DyckPath& path);
DyckPath tree_to_dyck(const PlaneTree& tree);

// Trees with s edges whose root has exactly d children, as the convolution
// over l_1+...+l_d = s-d of t_{l_1}...t_{l_d}.
BigCount count_trees_root_degree(unsigned s, unsigned d);
// Same count through t^(d)_s = t^(d-1)_s - t^(d-2)_{s-1}, t^(1)_s = t_{s-1}, t^(0) = 0.
// The recursion is only sound for 1 <= d <= s.
BigCount count_trees_root_degree_recurrence(unsigned s, unsigned d);

// Trees with s edges having at least one vertex of exit degree >= d (resp. == d).
BigCount count_trees_with_exit_degree_ge(unsigned s, unsigned d);
BigCount count_trees_with_exit_degree_eq(unsigned s, unsigned d);

// (2s+1)(3/4)^{d-2} t_s. Throws std::domain_error for d < 2.
Rational lemma54_bound_exact(unsigned s, unsigned d);
long double lemma54_bound(unsigned s, unsigned d);

struct HeightDistribution {
  int k = 0;
  std::vector<BigCount> count;         // count[m] = #paths with max height exactly m
  std::vector<long double> probability;  // normalized so the entries sum to 1 in long double
  long double mean() const;
};

// Exact max-height distribution of 2k-step Dyck paths.
HeightDistribution height_distribution(int k);
// #paths of length 2k with max height <= h, by reflection.
BigCount count_paths_height_le(int k, int h);

// B_k(tau) = sum_m P(H = m) exp(tau m / sqrt(k)).
long double excursion_functional(const HeightDistribution& dist, long double tau);
long double excursion_functional(int k, long double tau);

}  // namespace momentlab
