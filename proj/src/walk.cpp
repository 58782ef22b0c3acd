#include "momentlab/walk.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace momentlab {

namespace {

// Index of the unordered pair {a, b} in a (v+1) x (v+1) table.
inline int pair_index(int a, int b, int stride) { return a <= b ? a * stride + b : b * stride + a; }

}  // namespace

Walk::Walk(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || labels_.size() % 2 == 0) throw std::invalid_argument("walk must have odd length 2s+1");
  if (labels_.front() != 1 || labels_.back() != 1) throw std::invalid_argument("walk must start and end at label 1");
  int seen = 0;
  for (int x : labels_) {
    if (x < 1 || x > seen + 1) throw std::invalid_argument("walk labels are not in first-appearance order");
    seen = std::max(seen, x);
  }
  int stride = seen + 1;
  std::vector<int> count(static_cast<size_t>(stride) * stride, 0);
  for (size_t t = 1; t < labels_.size(); ++t) ++count[pair_index(labels_[t - 1], labels_[t], stride)];
  for (int c : count)
    if (c % 2) throw std::invalid_argument("walk is not even: some edge is passed an odd number of times");
}

Walk Walk::parse(std::string_view text) {
  std::vector<int> labels;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      throw std::invalid_argument("bad walk label '" + std::string(tok) + "'");
    labels.push_back(v);
    pos = comma + 1;
  }
  return Walk(std::move(labels));
}

int Walk::vertex_count() const { return *std::max_element(labels_.begin(), labels_.end()); }

std::string Walk::str() const {
  std::string out;
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(labels_[i]);
  }
  return out;
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> relabel;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int x : labels) {
    auto [it, fresh] = relabel.try_emplace(x, static_cast<int>(relabel.size()) + 1);
    out.push_back(it->second);
  }
  return out;
}

namespace {

struct WalkEnumerator {
  int s;
  WalkFilter filter;
  const std::function<void(const Walk&)>& fn;
  int stride;
  std::vector<int> labels;
  std::vector<int> count;
  int odd = 0;
  int vertices = 1;

  void run(int pos) {
    int len = 2 * s;
    if (pos == len) {
      if (odd == 0 && (!filter.tree_only || vertices == s + 1)) fn(Walk(labels));
      return;
    }
    int cur = labels[pos];
    int remaining = len - pos;
    for (int next = 1; next <= vertices + 1; ++next) {
      if (next == cur && !filter.allow_loops) continue;
      bool fresh = next == vertices + 1;
      int& c = count[pair_index(cur, next, stride)];
      int odd_after = odd + (c % 2 ? -1 : 1);
      // Every odd edge needs at least one more pass.
      if (odd_after > remaining - 1) continue;
      ++c;
      odd = odd_after;
      if (fresh) ++vertices;
      labels[pos + 1] = next;
      run(pos + 1);
      if (fresh) --vertices;
      --c;
      odd = odd + (c % 2 ? 1 : -1);
    }
  }
};

}  // namespace

void for_each_even_walk(int s, const WalkFilter& filter, const std::function<void(const Walk&)>& fn, int ceiling) {
  if (s < 0) throw std::invalid_argument("negative half-length");
  if (2 * s > ceiling)
    throw std::length_error("walk enumeration refused: 2s=" + std::to_string(2 * s) + " exceeds ceiling " +
                            std::to_string(ceiling));
  WalkEnumerator e{s, filter, fn, s + 3, std::vector<int>(2 * s + 1, 1), {}, 0, 1};
  e.count.assign(static_cast<size_t>(e.stride) * e.stride, 0);
  e.run(0);
}

std::vector<Walk> enumerate_even_walks(int s, bool allow_loops, int ceiling) {
  std::vector<Walk> out;
  for_each_even_walk(s, WalkFilter{allow_loops, false}, [&](const Walk& w) { out.push_back(w); }, ceiling);
  return out;
}

int WalkGraph::max_passes() const {
  int m = 0;
  for (const auto& e : frame) m = std::max(m, e.passes);
  return m;
}

WalkGraph build_graph(const Walk& walk) {
  WalkGraph g;
  g.s = walk.s();
  g.vertex_count = walk.vertex_count();
  int stride = g.vertex_count + 1;
  std::vector<int> index(static_cast<size_t>(stride) * stride, -1);
  g.exit_cluster.assign(stride, {});
  g.exit_degree.assign(stride, 0);
  std::vector<int8_t> theta;
  for (int t = 1; t <= walk.length(); ++t) {
    int a = walk[t - 1], b = walk[t];
    int& idx = index[pair_index(a, b, stride)];
    if (idx < 0) {
      idx = static_cast<int>(g.frame.size());
      g.frame.push_back(FrameEdge{std::min(a, b), std::max(a, b), 0});
    }
    int passes = ++g.frame[idx].passes;
    bool marked = passes % 2 == 1;
    g.steps.push_back(Step{a, b, marked});
    g.step_edge.push_back(idx);
    theta.push_back(marked ? 1 : -1);
    if (marked) g.exit_cluster[a].push_back(t);
  }
  for (int v = 1; v < stride; ++v) {
    g.exit_degree[v] = static_cast<int>(g.exit_cluster[v].size());
    g.max_exit_degree = std::max(g.max_exit_degree, g.exit_degree[v]);
  }
  g.theta = DyckPath(std::move(theta));
  return g;
}

std::vector<int> MuStructure::q_counts() const {
  std::vector<int> out;
  for (const auto& layer : q_layers) out.push_back(static_cast<int>(layer.size()));
  return out;
}

int StructureReport::nu_norm() const {
  int acc = 0;
  for (size_t k = 2; k < nu_counts.size(); ++k) acc += static_cast<int>(k - 1) * nu_counts[k];
  return acc;
}

namespace {

MuStructure build_mu(const WalkGraph& g) {
  MuStructure mu;
  int len = 2 * g.s;
  mu.role.assign(len, MarkRole::None);
  mu.q_layer.assign(len, 0);
  std::map<std::pair<int, int>, std::vector<int>> passes;
  for (int t = 1; t <= len; ++t) {
    const Step& st = g.step(t);
    if (st.marked) passes[{st.from, st.to}].push_back(t);
  }
  mu.kappa_mu.assign(g.vertex_count + 1, 0);
  for (const auto& [edge, times] : passes) {
    int j = static_cast<int>(times.size());
    mu.role[times[j - 1] - 1] = MarkRole::Mu;
    mu.mu_times.push_back(times[j - 1]);
    if (j >= 2) {
      mu.role[times[j - 2] - 1] = MarkRole::P;
      mu.p_times.push_back(times[j - 2]);
    }
    for (int i = 1; i <= j - 2; ++i) {
      int t = times[j - 2 - i];
      mu.role[t - 1] = MarkRole::Q;
      mu.q_layer[t - 1] = i;
      if (static_cast<int>(mu.q_layers.size()) < i) mu.q_layers.resize(i);
      mu.q_layers[i - 1].push_back(t);
    }
    ++mu.kappa_mu[edge.second];
    if (edge.first < edge.second && passes.count({edge.second, edge.first})) ++mu.p_double;
  }
  if (g.vertex_count >= 1) mu.kappa_mu[1] += 1;
  std::sort(mu.mu_times.begin(), mu.mu_times.end());
  std::sort(mu.p_times.begin(), mu.p_times.end());
  for (auto& layer : mu.q_layers) std::sort(layer.begin(), layer.end());
  mu.p_prime = static_cast<int>(mu.p_times.size());
  mu.mu_counts.assign(g.s + 2, 0);
  for (int v = 1; v <= g.vertex_count; ++v) ++mu.mu_counts[mu.kappa_mu[v]];
  return mu;
}

}  // namespace

ReducedWalk reduce_with_times(const Walk& walk) {
  WalkGraph g = build_graph(walk);
  ReducedWalk r;
  for (int t = 0; t <= walk.length(); ++t) {
    r.labels.push_back(walk[t]);
    r.times.push_back(t);
    // Pattern x, y, x with the step into y marked: drop y and the second x.
    size_t n = r.labels.size();
    if (n >= 3 && r.labels[n - 3] == r.labels[n - 1] && g.step(r.times[n - 2]).marked) {
      r.labels.resize(n - 2);
      r.times.resize(n - 2);
    }
  }
  return r;
}

Walk reduce(const Walk& walk) { return Walk(canonical_labels(reduce_with_times(walk).labels)); }

WalkAnalysis analyze(const Walk& walk) {
  WalkAnalysis a;
  a.walk = walk;
  a.graph = build_graph(walk);
  a.mu = build_mu(a.graph);
  const WalkGraph& g = a.graph;
  StructureReport& rep = a.report;
  int V = g.vertex_count, len = 2 * g.s;

  std::vector<std::vector<int>> incident(V + 1);
  for (size_t e = 0; e < g.frame.size(); ++e) {
    incident[g.frame[e].a].push_back(static_cast<int>(e));
    if (!g.frame[e].loop()) incident[g.frame[e].b].push_back(static_cast<int>(e));
  }
  rep.marked_arrivals.assign(V + 1, {});
  rep.open.assign(len, false);
  std::vector<int> running(g.frame.size(), 0);
  for (int t = 1; t <= len; ++t) {
    const Step& st = g.step(t);
    if (st.marked) {
      rep.marked_arrivals[st.to].push_back(t);
      bool open = false;
      for (int e : incident[st.to]) open = open || running[e] % 2 == 1;
      if (open) {
        rep.open[t - 1] = true;
        rep.open_instants.push_back(t);
      }
    }
    ++running[g.step_edge[t - 1]];
  }

  rep.kappa_nu.assign(V + 1, 0);
  rep.nu_counts.assign(g.s + 2, 0);
  for (int v = 1; v <= V; ++v) {
    int k = static_cast<int>(rep.marked_arrivals[v].size()) + (v == 1 ? 1 : 0);
    rep.kappa_nu[v] = k;
    if (k >= 2) ++rep.nu_counts[k];
    if (k != 2) continue;
    int instant = v == 1 ? rep.marked_arrivals[v][0] : rep.marked_arrivals[v][1];
    if (rep.open[instant - 1]) {
      ++rep.r;
    } else if (v != 1 && g.step(rep.marked_arrivals[v][0]).from == g.step(instant).from) {
      ++rep.p;
    }
  }

  rep.reduced = reduce_with_times(walk);
  rep.imported_cells.assign(V + 1, {});
  const auto& red = rep.reduced;
  for (size_t i = 1; i < red.times.size(); ++i) {
    bool marked = g.step(red.times[i]).marked;
    if (!marked) rep.imported_cells[red.labels[i]].push_back(red.times[i]);
    if (marked && i + 1 < red.times.size() && !g.step(red.times[i + 1]).marked)
      rep.bts_instants.push_back(red.times[i]);
  }

  rep.max_exit_degree = g.max_exit_degree;
  rep.multiplicity_profile.assign(g.s + 1, 0);
  for (const auto& e : g.frame) ++rep.multiplicity_profile[e.passes / 2];
  rep.max_height = g.theta.max_height();
  return a;
}

nlohmann::json LemmaCheck::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  j["witnesses"] = witnesses;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) j["rows"].push_back(row);
  return j;
}

LemmaCheck verify_lemma_5_2(const WalkAnalysis& a) {
  LemmaCheck out;
  const WalkGraph& g = a.graph;
  const auto& rep = a.report;
  int len = 2 * g.s;
  for (int b = 1; b <= g.vertex_count; ++b) {
    bool root = b == 1;
    long long in_count = static_cast<long long>(rep.marked_arrivals[b].size());
    long long nonmarked_exits = 0, mu_in = 0, p_in = 0, q_in = 0;
    for (int t = 1; t <= len; ++t) {
      const Step& st = g.step(t);
      if (st.from == b && !st.marked) ++nonmarked_exits;
      if (st.to == b && st.marked) {
        switch (a.mu.role[t - 1]) {
          case MarkRole::Mu: ++mu_in; break;
          case MarkRole::P: ++p_in; break;
          case MarkRole::Q: ++q_in; break;
          case MarkRole::None: break;
        }
      }
    }
    if (nonmarked_exits != in_count || mu_in + p_in + q_in != in_count) {
      out.pass = false;
      out.witnesses.push_back("vertex " + std::to_string(b) + ": non-marked exits " + std::to_string(nonmarked_exits) +
                              " vs marked arrivals " + std::to_string(in_count));
    }
    long long cap_mu = a.mu.kappa_mu[b] + g.exit_degree[b];
    long long open_edges = 0, arrivals = 0, max_open = 0;
    for (int t = 1; t <= len + 1; ++t) {
      // open_edges and arrivals describe [0, t-1] here.
      long long cap_in = 2 * (arrivals + (root ? 1 : 0));
      max_open = std::max(max_open, open_edges);
      if (open_edges > cap_in || open_edges > cap_mu) {
        out.pass = false;
        out.witnesses.push_back("vertex " + std::to_string(b) + " at t=" + std::to_string(t) + ": A=" +
                                std::to_string(open_edges) + " exceeds min(" + std::to_string(cap_in) + "," +
                                std::to_string(cap_mu) + ")");
      }
      if (t > len) break;
      const Step& st = g.step(t);
      int sign = st.marked ? 1 : -1;
      if (st.to == b) open_edges += sign;
      if (st.from == b) open_edges += sign;
      if (st.to == b && st.marked) ++arrivals;
    }
    out.rows.push_back({{"vertex", b},
                        {"marked_arrivals", in_count},
                        {"nonmarked_exits", nonmarked_exits},
                        {"mu_arrivals", mu_in},
                        {"p_arrivals", p_in},
                        {"q_arrivals", q_in},
                        {"kappa_mu", a.mu.kappa_mu[b]},
                        {"exit_degree", g.exit_degree[b]},
                        {"max_open_edges", max_open}});
  }
  return out;
}

LemmaCheck verify_lemma_5_5(const WalkAnalysis& a) {
  LemmaCheck out;
  const auto& rep = a.report;
  long long L = static_cast<long long>(rep.bts_instants.size());
  for (int b = 1; b <= a.graph.vertex_count; ++b) {
    long long local = 0;
    for (int eta : rep.bts_instants)
      if (a.walk[eta] == b) ++local;
    long long remote = L - local;
    long long J = static_cast<long long>(rep.imported_cells[b].size());
    long long kappa = rep.kappa_nu[b];
    long long primary = static_cast<long long>(rep.marked_arrivals[b].size());
    if (J > remote + kappa) {
      out.pass = false;
      out.witnesses.push_back("vertex " + std::to_string(b) + ": J=" + std::to_string(J) + " > L_remote + kappa = " +
                              std::to_string(remote + kappa));
    }
    if (primary + J > 2 * kappa + L) {
      out.pass = false;
      out.witnesses.push_back("vertex " + std::to_string(b) + ": cells " + std::to_string(primary + J) +
                              " > 2 kappa + L = " + std::to_string(2 * kappa + L));
    }
    out.rows.push_back({{"vertex", b},
                        {"imported", J},
                        {"primary", primary},
                        {"kappa", kappa},
                        {"bts_remote", remote},
                        {"bts_total", L}});
  }
  return out;
}

nlohmann::json to_json(const WalkAnalysis& a) {
  using nlohmann::json;
  const auto& g = a.graph;
  const auto& rep = a.report;
  json j;
  j["walk"] = a.walk.str();
  j["s"] = g.s;
  j["vertex_count"] = g.vertex_count;
  j["dyck"] = g.theta.str();
  j["max_height"] = rep.max_height;
  json marked = json::array();
  for (int t = 1; t <= 2 * g.s; ++t)
    if (g.step(t).marked) marked.push_back(t);
  j["marked_steps"] = marked;
  json frame = json::array();
  for (const auto& e : g.frame) frame.push_back({{"a", e.a}, {"b", e.b}, {"passes", e.passes}});
  j["frame"] = frame;
  json vertices = json::array();
  for (int v = 1; v <= g.vertex_count; ++v) {
    vertices.push_back({{"label", v},
                        {"kappa_nu", rep.kappa_nu[v]},
                        {"kappa_mu", a.mu.kappa_mu[v]},
                        {"exit_degree", g.exit_degree[v]},
                        {"primary_cells", rep.marked_arrivals[v]},
                        {"imported_cells", rep.imported_cells[v]}});
  }
  j["vertices"] = vertices;
  j["open_instants"] = rep.open_instants;
  j["bts_instants"] = rep.bts_instants;
  j["reduced"] = {{"labels", rep.reduced.labels}, {"times", rep.reduced.times}};
  json nu = json::object();
  for (size_t k = 2; k < rep.nu_counts.size(); ++k)
    if (rep.nu_counts[k]) nu[std::to_string(k)] = rep.nu_counts[k];
  j["nu"] = nu;
  j["r"] = rep.r;
  j["p"] = rep.p;
  json mu = json::object();
  for (size_t m = 1; m < a.mu.mu_counts.size(); ++m)
    if (a.mu.mu_counts[m]) mu[std::to_string(m)] = a.mu.mu_counts[m];
  j["mu"] = mu;
  j["mu_instants"] = a.mu.mu_times;
  j["p_instants"] = a.mu.p_times;
  j["q_layers"] = a.mu.q_layers;
  j["p_prime"] = a.mu.p_prime;
  j["p_double"] = a.mu.p_double;
  j["max_exit_degree"] = rep.max_exit_degree;
  j["multiplicity_profile"] = rep.multiplicity_profile;
  return j;
}

}  // namespace momentlab
