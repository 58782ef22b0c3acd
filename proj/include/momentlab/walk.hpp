#pragma once

#include "momentlab/dyck.hpp"

#include "json.hpp"

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace momentlab {

inline constexpr int kWalkCeiling = 12;  // on 2s

// Canonical even closed walk. Labels are 1-based in first-appearance order.
class Walk {
 public:
  Walk() : labels_{1} {}
  // Throws std::invalid_argument on a non-canonical, open or odd walk.
  explicit Walk(std::vector<int> labels);
  static Walk parse(std::string_view text);  // "1,2,3,2,1"

  int s() const { return static_cast<int>(labels_.size() / 2); }
  int length() const { return static_cast<int>(labels_.size()) - 1; }
  int vertex_count() const;
  int operator[](int t) const { return labels_[t]; }
  const std::vector<int>& labels() const { return labels_; }
  std::string str() const;

  auto operator<=>(const Walk&) const = default;

 private:
  std::vector<int> labels_;
};

// Relabels an arbitrary closed label sequence into first-appearance order.
std::vector<int> canonical_labels(const std::vector<int>& labels);

struct WalkFilter {
  bool allow_loops = true;
  bool tree_only = false;  // no self-intersections: |V| = s + 1
};

void for_each_even_walk(int s, const WalkFilter& filter, const std::function<void(const Walk&)>& fn,
                        int ceiling = kWalkCeiling);
std::vector<Walk> enumerate_even_walks(int s, bool allow_loops, int ceiling = kWalkCeiling);

struct Step {
  int from = 0;
  int to = 0;
  bool marked = false;
  bool loop() const { return from == to; }
};

struct FrameEdge {
  int a = 0, b = 0;  // a <= b
  int passes = 0;
  bool loop() const { return a == b; }
};

// Vertex-indexed vectors below have size vertex_count + 1; index 0 is unused.
struct WalkGraph {
  int s = 0;
  int vertex_count = 0;
  std::vector<Step> steps;         // steps[t-1] is e(t)
  std::vector<int> step_edge;      // frame edge index of e(t), same indexing
  std::vector<FrameEdge> frame;    // in order of first passage
  std::vector<std::vector<int>> exit_cluster;  // marked exit instants per vertex
  std::vector<int> exit_degree;
  int max_exit_degree = 0;
  DyckPath theta;

  const Step& step(int t) const { return steps[t - 1]; }
  int max_passes() const;
};

enum class MarkRole { None, Mu, P, Q };

struct MuStructure {
  std::vector<MarkRole> role;   // per step, t-1 indexing
  std::vector<int> q_layer;     // 1-based layer for Q steps, 0 otherwise
  std::vector<int> mu_times;
  std::vector<int> p_times;
  std::vector<std::vector<int>> q_layers;  // q_layers[i] = instants of Q_{i+1}
  std::vector<int> kappa_mu;    // per vertex, root convention M + 1
  std::vector<int> mu_counts;   // mu_counts[m] = #vertices with kappa_mu = m
  int p_prime = 0;
  int p_double = 0;             // pairs of mu-edges (a,b), (b,a) with a != b
  std::vector<int> q_counts() const;
};

struct ReducedWalk {
  std::vector<int> labels;  // original labels of the surviving positions
  std::vector<int> times;   // original instants of the surviving positions
};

struct StructureReport {
  std::vector<int> kappa_nu;                     // per vertex, root convention N + 1
  std::vector<std::vector<int>> marked_arrivals; // per vertex; these are the primary cells
  std::vector<int> open_instants;                // sorted
  std::vector<bool> open;                        // per step, t-1 indexing
  std::vector<int> nu_counts;                    // nu_counts[k] = #vertices with kappa_nu = k, k >= 2
  int r = 0;  // simple self-intersections with an open instant
  int p = 0;  // simple non-root self-intersections twice through one directed edge, not open
  ReducedWalk reduced;
  std::vector<int> bts_instants;                 // original instants
  std::vector<std::vector<int>> imported_cells;  // per vertex, original instants
  int max_exit_degree = 0;
  std::vector<int> multiplicity_profile;         // [m] = #frame edges of multiplicity m = M/2
  int max_height = 0;

  int nu_norm() const;  // sum (k-1) nu_k
};

struct WalkAnalysis {
  Walk walk;
  WalkGraph graph;
  MuStructure mu;
  StructureReport report;
};

WalkAnalysis analyze(const Walk& walk);
WalkGraph build_graph(const Walk& walk);

ReducedWalk reduce_with_times(const Walk& walk);
Walk reduce(const Walk& walk);

struct LemmaCheck {
  bool pass = true;
  std::vector<std::string> witnesses;
  std::vector<std::map<std::string, long long>> rows;  // per vertex ledger
  nlohmann::json to_json() const;
};

LemmaCheck verify_lemma_5_2(const WalkAnalysis& a);
LemmaCheck verify_lemma_5_5(const WalkAnalysis& a);
inline LemmaCheck verify_lemma_5_2(const Walk& w) { return verify_lemma_5_2(analyze(w)); }
inline LemmaCheck verify_lemma_5_5(const Walk& w) { return verify_lemma_5_5(analyze(w)); }

// Sorted-key JSON of the full structure report.
nlohmann::json to_json(const WalkAnalysis& a);

}  // namespace momentlab
