#include "momentlab/dyck.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace momentlab;

namespace {

// All +-1 sequences of length 2k that stay nonnegative and end at zero, by brute force.
std::vector<std::vector<int8_t>> brute_dyck(int k) {
  std::vector<std::vector<int8_t>> out;
  for (unsigned long mask = 0; mask < (1ul << (2 * k)); ++mask) {
    std::vector<int8_t> steps;
    int h = 0;
    bool ok = true;
    for (int i = 2 * k - 1; i >= 0 && ok; --i) {
      int8_t st = (mask >> i) & 1 ? 1 : -1;
      h += st;
      ok = h >= 0;
      steps.push_back(st);
    }
    if (ok && h == 0) out.push_back(steps);
  }
  return out;
}

unsigned long long binom(unsigned n, unsigned k) {
  unsigned long long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Child counts of every vertex of the tree coded by a Dyck path.
std::vector<int> child_counts(const std::vector<int8_t>& steps) {
  std::vector<int> counts{0}, stack{0};
  for (int8_t st : steps) {
    if (st > 0) {
      ++counts[stack.back()];
      counts.push_back(0);
      stack.push_back(static_cast<int>(counts.size()) - 1);
    } else {
      stack.pop_back();
    }
  }
  return counts;
}

int max_height(const std::vector<int8_t>& steps) {
  int h = 0, m = 0;
  for (int8_t st : steps) m = std::max(m, h += st);
  return m;
}

}  // namespace

TEST(Catalan, ClosedFormAndRecurrence) {
  auto rec = catalan_by_recurrence(30);
  for (unsigned k = 0; k <= 30; ++k) {
    EXPECT_EQ(catalan(k), rec[k]);
    EXPECT_EQ(catalan(k), BigCount(std::to_string(binom(2 * k, k) / (k + 1))));
  }
  EXPECT_EQ(catalan(3), 5);
  EXPECT_EQ(catalan(12), 208012);
}

TEST(Dyck, EnumerationMatchesBruteForce) {
  for (int k = 0; k <= 8; ++k) {
    auto paths = enumerate_dyck(k);
    auto brute = brute_dyck(k);
    ASSERT_EQ(paths.size(), brute.size()) << k;
    ASSERT_EQ(BigCount(paths.size()), catalan(k));
    for (size_t i = 0; i < paths.size(); ++i) {
      EXPECT_EQ(paths[i].steps(), brute[i]) << "lexicographic order, k=" << k;
      if (i) EXPECT_LT(paths[i - 1], paths[i]);
    }
  }
}

TEST(Dyck, ValidationAndCeiling) {
  EXPECT_THROW(DyckPath({1, -1, -1, 1}), std::invalid_argument);
  EXPECT_THROW(DyckPath({1, 1, -1}), std::invalid_argument);
  EXPECT_THROW(DyckPath({1, 2, -1, -2}), std::invalid_argument);
  EXPECT_NO_THROW(DyckPath({1, -1}));
  EXPECT_EQ(DyckPath({1, 1, -1, -1}).str(), "UUDD");
  EXPECT_EQ(DyckPath({1, 1, -1, -1}).max_height(), 2);
  EXPECT_THROW(enumerate_dyck(kDyckCeiling + 1), std::length_error);
  EXPECT_THROW(enumerate_dyck(5, 4), std::length_error);
}

TEST(Dyck, TreeBijectionRoundTrips) {
  for (int k = 0; k <= 9; ++k) {
    std::set<std::vector<std::vector<int>>> seen;
    for_each_dyck(k, [&](const DyckPath& p) {
      PlaneTree t = dyck_to_tree(p);
      EXPECT_EQ(t.edge_count(), k);
      EXPECT_EQ(tree_to_dyck(t), p);
      seen.insert(t.children);
    });
    EXPECT_EQ(BigCount(seen.size()), catalan(k));
  }
}

TEST(Trees, RootDegreeCountsMatchBruteForce) {
  for (int s = 0; s <= 9; ++s) {
    std::map<int, long> hist;
    for (const auto& p : brute_dyck(s)) ++hist[child_counts(p)[0]];
    for (int d = 0; d <= s; ++d) EXPECT_EQ(count_trees_root_degree(s, d), hist[d]) << s << "," << d;
  }
  for (unsigned s = 1; s <= 14; ++s)
    for (unsigned d = 1; d <= s; ++d) EXPECT_EQ(count_trees_root_degree_recurrence(s, d), count_trees_root_degree(s, d));
  for (unsigned s = 2; s <= 20; ++s) EXPECT_EQ(count_trees_root_degree(s, 2), catalan(s - 1));
}

TEST(Trees, ExitDegreeTailsMatchBruteForce) {
  for (int s = 2; s <= 9; ++s) {
    std::map<int, long> at_least, exactly;
    for (const auto& p : brute_dyck(s)) {
      auto c = child_counts(p);
      int m = *std::max_element(c.begin(), c.end());
      for (int d = 2; d <= m; ++d) {
        ++at_least[d];
        if (std::find(c.begin(), c.end(), d) != c.end()) ++exactly[d];
      }
    }
    for (int d = 2; d <= s; ++d) {
      EXPECT_EQ(count_trees_with_exit_degree_ge(s, d), at_least[d]) << s << "," << d;
      EXPECT_EQ(count_trees_with_exit_degree_eq(s, d), exactly[d]) << s << "," << d;
    }
  }
}

TEST(Trees, ExitDegreeBound) {
  for (unsigned s = 2; s <= 16; ++s)
    for (unsigned d = 2; d <= s; ++d) {
      Rational bound = lemma54_bound_exact(s, d);
      EXPECT_LE(Rational(count_trees_with_exit_degree_ge(s, d)), bound);
      EXPECT_NEAR(static_cast<double>(lemma54_bound(s, d)), bound.get_d(), 1e-9 * bound.get_d());
    }
  EXPECT_THROW(lemma54_bound_exact(5, 1), std::domain_error);
}

TEST(Heights, DistributionMatchesTransferCounts) {
  // Independent count of paths with max height <= h by a height-capped walk DP.
  for (int k : {1, 5, 12, 40}) {
    for (int h = 0; h <= k; ++h) {
      std::vector<BigCount> row(h + 2, 0);
      row[0] = 1;
      for (int step = 0; step < 2 * k; ++step) {
        std::vector<BigCount> next(h + 2, 0);
        for (int y = 0; y <= h; ++y) {
          if (y + 1 <= h) next[y + 1] += row[y];
          if (y > 0) next[y - 1] += row[y];
        }
        row = std::move(next);
      }
      EXPECT_EQ(count_paths_height_le(k, h), row[0]) << k << "," << h;
    }
  }
  for (int k = 1; k <= 8; ++k) {
    auto d = height_distribution(k);
    std::map<int, long> hist;
    for (const auto& p : brute_dyck(k)) ++hist[max_height(p)];
    for (const auto& [m, c] : hist) EXPECT_EQ(d.count[m], c);
    long double total = 0;
    for (long double p : d.probability) total += p;
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-15);
  }
}

TEST(Excursion, NormalizationAndMonotonicity) {
  for (int k : {1, 10, 50, 200}) {
    auto d = height_distribution(k);
    EXPECT_EQ(excursion_functional(d, 0.0L), 1.0L);
    long double prev = 1.0L;
    for (long double tau = 0.25L; tau <= 4.0L; tau += 0.25L) {
      long double b = excursion_functional(d, tau);
      EXPECT_GT(b, prev);
      prev = b;
    }
  }
  // Direct average over all paths at small k.
  for (int k = 2; k <= 8; ++k) {
    auto paths = brute_dyck(k);
    double sum = 0;
    for (const auto& p : paths) sum += std::exp(1.5 * max_height(p) / std::sqrt(k));
    EXPECT_NEAR(static_cast<double>(excursion_functional(k, 1.5L)), sum / paths.size(), 1e-12);
  }
}

TEST(Excursion, StabilizesInK) {
  for (long double tau : {0.5L, 1.0L}) {
    long double a = excursion_functional(200, tau), b = excursion_functional(400, tau);
    EXPECT_LE(std::fabs(b - a), 0.05L * b);
  }
  long double prev = 0;
  for (int k : {50, 100, 200, 400}) {
    long double b = excursion_functional(k, 1.0L);
    EXPECT_GE(b, prev);
    prev = b;
  }
  auto d = height_distribution(2000);
  EXPECT_NEAR(static_cast<double>(d.mean() / std::sqrt(2000.0L)), std::sqrt(M_PI), 0.02 * std::sqrt(M_PI));
}
