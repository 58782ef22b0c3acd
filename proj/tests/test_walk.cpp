#include "momentlab/walk.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace momentlab;

namespace {

// Closed label sequences in first-appearance order whose undirected edges all have even multiplicity.
long brute_even_walks(int s, bool loops) {
  long count = 0;
  std::vector<int> w(2 * s + 1, 1);
  std::function<void(int, int)> rec = [&](int pos, int seen) {
    if (pos == 2 * s) {
      w[pos] = 1;
      std::map<std::pair<int, int>, int> m;
      for (int t = 0; t < 2 * s; ++t) {
        if (!loops && w[t] == w[t + 1]) return;
        ++m[{std::min(w[t], w[t + 1]), std::max(w[t], w[t + 1])}];
      }
      for (const auto& [e, c] : m)
        if (c % 2) return;
      ++count;
      return;
    }
    for (int x = 1; x <= seen + 1; ++x) {
      w[pos] = x;
      rec(pos + 1, std::max(seen, x));
    }
  };
  if (s == 0) return 1;
  rec(1, 1);
  return count;
}

const char* kW14 = "1,2,3,4,3,5,2,3,4,3,2,5,3,2,1";

}  // namespace

TEST(Walks, CountsMatchBruteForce) {
  const long with_loops[] = {1, 2, 8, 50, 433, 4805};
  const long without[] = {1, 1, 3, 16, 122, 1209};
  for (int s = 0; s <= 5; ++s) {
    EXPECT_EQ(static_cast<long>(enumerate_even_walks(s, true).size()), with_loops[s]);
    EXPECT_EQ(static_cast<long>(enumerate_even_walks(s, false).size()), without[s]);
  }
  for (int s = 0; s <= 4; ++s) {
    EXPECT_EQ(brute_even_walks(s, true), with_loops[s]);
    EXPECT_EQ(brute_even_walks(s, false), without[s]);
  }
}

TEST(Walks, TreeWalksAreCatalan) {
  const long catalan[] = {1, 1, 2, 5, 14, 42};
  for (int s = 0; s <= 5; ++s) {
    long n = 0;
    for_each_even_walk(s, WalkFilter{false, true}, [&](const Walk& w) {
      ++n;
      EXPECT_EQ(w.vertex_count(), s + 1);
    });
    EXPECT_EQ(n, catalan[s]);
  }
}

TEST(Walks, ParseAndValidate) {
  Walk w = Walk::parse("1,2,1");
  EXPECT_EQ(w.s(), 1);
  EXPECT_EQ(w.str(), "1,2,1");
  EXPECT_THROW(Walk::parse("1,2"), std::invalid_argument);
  EXPECT_THROW(Walk::parse("2,1,2"), std::invalid_argument);
  EXPECT_THROW(Walk::parse("1,3,1"), std::invalid_argument);
  EXPECT_THROW(Walk::parse("1,2,3,1"), std::invalid_argument);
  EXPECT_THROW(Walk::parse("1,x,1"), std::invalid_argument);
  EXPECT_THROW(enumerate_even_walks(7, true), std::length_error);
  EXPECT_EQ(canonical_labels({7, 3, 7, 9, 7}), (std::vector<int>{1, 2, 1, 3, 1}));
}

TEST(WorkedExample, W14Structure) {
  WalkAnalysis a = analyze(Walk::parse(kW14));
  const auto& r = a.report;
  EXPECT_EQ(a.graph.s, 7);
  EXPECT_EQ(a.graph.vertex_count, 5);
  EXPECT_EQ(r.kappa_nu[2], 3);
  EXPECT_EQ(r.kappa_nu[4], 2);
  EXPECT_EQ(r.open_instants, (std::vector<int>{6, 10}));
  EXPECT_EQ(r.bts_instants, (std::vector<int>{6, 10}));
  EXPECT_EQ(a.mu.mu_times, (std::vector<int>{1, 2, 5, 6, 8, 10}));
  EXPECT_EQ(a.mu.p_times, (std::vector<int>{3}));
  EXPECT_EQ(a.mu.mu_counts[1], 4);
  EXPECT_EQ(a.mu.mu_counts[3], 1);
  EXPECT_EQ(a.mu.p_prime, 1);
  EXPECT_EQ(a.mu.p_double, 1);
  for (int q : a.mu.q_counts()) EXPECT_EQ(q, 0);
  EXPECT_EQ(r.marked_arrivals[3], (std::vector<int>{2}));
  EXPECT_EQ(r.imported_cells[3], (std::vector<int>{7, 12}));
  EXPECT_EQ(r.reduced.labels, (std::vector<int>{1, 2, 3, 5, 2, 3, 2, 5, 3, 2, 1}));
  EXPECT_EQ(r.reduced.times, (std::vector<int>{0, 1, 2, 5, 6, 7, 10, 11, 12, 13, 14}));
  EXPECT_EQ(a.graph.max_exit_degree, 4);
  EXPECT_TRUE(verify_lemma_5_2(a).pass);
  EXPECT_TRUE(verify_lemma_5_5(a).pass);
}

TEST(WorkedExample, MarkedStepsProjectToDyck) {
  WalkAnalysis a = analyze(Walk::parse(kW14));
  std::vector<int> marked;
  for (int t = 1; t <= 14; ++t)
    if (a.mu.role[t - 1] != MarkRole::None) marked.push_back(t);
  EXPECT_EQ(marked, (std::vector<int>{1, 2, 3, 5, 6, 8, 10}));
  EXPECT_EQ(a.graph.theta.half_length(), 7);
}

TEST(WalkProperties, ExhaustiveInvariants) {
  for (int s = 1; s <= 5; ++s) {
    for_each_even_walk(s, WalkFilter{}, [&](const Walk& w) {
      WalkAnalysis a = analyze(w);
      const auto& r = a.report;
      int marked = 0, arrivals = 0;
      for (auto role : a.mu.role) marked += role != MarkRole::None;
      for (const auto& v : r.marked_arrivals) arrivals += static_cast<int>(v.size());
      ASSERT_EQ(marked, s) << w.str();
      ASSERT_EQ(arrivals, s) << w.str();
      // Each vertex beyond the root costs one marked arrival.
      ASSERT_EQ(r.nu_norm(), s + 1 - a.graph.vertex_count) << w.str();
      for (int v = 1; v <= a.graph.vertex_count; ++v) ASSERT_LE(a.mu.kappa_mu[v], r.kappa_nu[v]) << w.str();
      std::set<int> open(r.open_instants.begin(), r.open_instants.end());
      for (int b : r.bts_instants) ASSERT_TRUE(open.count(b)) << w.str();
      for (int t = 1; t <= 2 * s; ++t) ASSERT_EQ(r.open[t - 1], open.count(t) > 0);
      ASSERT_EQ(r.reduced.labels.front(), 1);
      ASSERT_EQ(r.reduced.labels.back(), 1);
      ASSERT_EQ(r.reduced.labels.size(), r.reduced.times.size());
      ASSERT_TRUE(std::is_sorted(r.reduced.times.begin(), r.reduced.times.end()));
      ASSERT_TRUE(verify_lemma_5_2(a).pass) << w.str();
      ASSERT_TRUE(verify_lemma_5_5(a).pass) << w.str();
    });
  }
}

TEST(WalkProperties, TreeWalksHaveNoSelfIntersections) {
  for_each_even_walk(4, WalkFilter{false, true}, [&](const Walk& w) {
    WalkAnalysis a = analyze(w);
    EXPECT_EQ(a.report.nu_norm(), 0);
    EXPECT_TRUE(a.report.open_instants.empty());
    EXPECT_TRUE(a.report.bts_instants.empty());
    EXPECT_EQ(a.graph.max_passes(), 2);
  });
}

TEST(WalkJson, SortedAndStable) {
  auto j1 = to_json(analyze(Walk::parse(kW14))).dump();
  auto j2 = to_json(analyze(Walk::parse(kW14))).dump();
  EXPECT_EQ(j1, j2);
  auto j = to_json(analyze(Walk::parse(kW14)));
  std::string prev;
  for (auto it = j.begin(); it != j.end(); ++it) {
    EXPECT_LT(prev, it.key());
    prev = it.key();
  }
}
