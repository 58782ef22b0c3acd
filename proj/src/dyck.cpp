#include "momentlab/dyck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momentlab {

DyckPath::DyckPath(std::vector<int8_t> steps) : steps_(std::move(steps)) {
  if (steps_.size() % 2 != 0) throw std::invalid_argument("Dyck path must have even length");
  int h = 0;
  for (int8_t x : steps_) {
    if (x != 1 && x != -1) throw std::invalid_argument("Dyck steps must be +1 or -1");
    h += x;
    if (h < 0) throw std::invalid_argument("Dyck path dips below zero");
  }
  if (h != 0) throw std::invalid_argument("Dyck path does not return to zero");
}

std::vector<int> DyckPath::heights() const {
  std::vector<int> h(steps_.size() + 1, 0);
  for (size_t t = 0; t < steps_.size(); ++t) h[t + 1] = h[t] + steps_[t];
  return h;
}

int DyckPath::max_height() const {
  auto h = heights();
  return *std::max_element(h.begin(), h.end());
}

std::string DyckPath::str() const {
  std::string out;
  for (int8_t x : steps_) out += x > 0 ? 'U' : 'D';
  return out;
}

BigCount catalan(unsigned k) {
  BigCount r = binomial(2 * k, k);
  return r / (k + 1);
}

std::vector<BigCount> catalan_by_recurrence(unsigned kmax) {
  std::vector<BigCount> t(kmax + 1);
  t[0] = 1;
  for (unsigned k = 1; k <= kmax; ++k) {
    t[k] = 0;
    for (unsigned j = 0; j < k; ++j) t[k] += t[k - 1 - j] * t[j];
  }
  return t;
}

namespace {

void dyck_dfs(std::vector<int8_t>& buf, size_t pos, int h, const std::function<void(const DyckPath&)>& fn) {
  size_t n = buf.size();
  if (pos == n) {
    fn(DyckPath(buf));
    return;
  }
  size_t left = n - pos;
  if (h > 0) {
    buf[pos] = -1;
    dyck_dfs(buf, pos + 1, h - 1, fn);
  }
  if (static_cast<size_t>(h) + 1 <= left - 1) {
    buf[pos] = 1;
    dyck_dfs(buf, pos + 1, h + 1, fn);
  }
}

}  // namespace

void for_each_dyck(int k, const std::function<void(const DyckPath&)>& fn, int ceiling) {
  if (k < 0) throw std::invalid_argument("negative half-length");
  if (k > ceiling)
    throw std::length_error("Dyck enumeration refused: k=" + std::to_string(k) + " exceeds ceiling " +
                            std::to_string(ceiling));
  std::vector<int8_t> buf(2 * static_cast<size_t>(k));
  dyck_dfs(buf, 0, 0, fn);
}

std::vector<DyckPath> enumerate_dyck(int k, int ceiling) {
  std::vector<DyckPath> out;
  for_each_dyck(k, [&](const DyckPath& p) { out.push_back(p); }, ceiling);
  return out;
}

PlaneTree dyck_to_tree(const DyckPath& path) {
  PlaneTree tree;
  tree.children.emplace_back();
  std::vector<int> stack{0};
  for (int8_t x : path.steps()) {
    if (x > 0) {
      int v = static_cast<int>(tree.children.size());
      tree.children.emplace_back();
      tree.children[stack.back()].push_back(v);
      stack.push_back(v);
    } else {
      stack.pop_back();
    }
  }
  return tree;
}

namespace {

void tree_walk(const PlaneTree& tree, int v, std::vector<int8_t>& out) {
  for (int c : tree.children[v]) {
    out.push_back(1);
    tree_walk(tree, c, out);
    out.push_back(-1);
  }
}

}  // namespace

DyckPath tree_to_dyck(const PlaneTree& tree) {
  std::vector<int8_t> steps;
  if (!tree.children.empty()) tree_walk(tree, 0, steps);
  return DyckPath(std::move(steps));
}

namespace {

// Truncated product of two coefficient vectors.
std::vector<BigCount> mul(const std::vector<BigCount>& a, const std::vector<BigCount>& b, size_t order) {
  std::vector<BigCount> c(order + 1, 0);
  for (size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j <= order; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<BigCount> catalan_table(unsigned kmax) {
  std::vector<BigCount> t(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) t[k] = catalan(k);
  return t;
}

// Number of trees with s edges whose every vertex has exit degree in `allowed`
// (allowed[0] must be true, leaves exist). Memoized over subtree sizes.
BigCount count_trees_degree_set(unsigned s, const std::vector<bool>& allowed) {
  std::vector<BigCount> f(s + 1, 0);
  f[0] = 1;
  for (unsigned n = 1; n <= s; ++n) {
    // f[n] = sum over root degree j of [x^{n-j}] f^j, using f[0..n-1] only.
    std::vector<BigCount> head(f.begin(), f.begin() + n);
    std::vector<BigCount> power{1};
    BigCount total = 0;
    for (unsigned j = 1; j <= n; ++j) {
      power = mul(power, head, n - j + 1);
      if (j < allowed.size() && allowed[j] && n - j < power.size()) total += power[n - j];
    }
    f[n] = total;
  }
  return f[s];
}

}  // namespace

BigCount count_trees_root_degree(unsigned s, unsigned d) {
  if (d > s) return 0;
  if (d == 0) return s == 0 ? 1 : 0;
  auto t = catalan_table(s - d);
  std::vector<BigCount> power{1};
  for (unsigned i = 0; i < d; ++i) power = mul(power, t, s - d);
  return power[s - d];
}

BigCount count_trees_root_degree_recurrence(unsigned s, unsigned d) {
  if (d == 0) return 0;
  if (s == 0) return 0;
  if (d == 1) return catalan(s - 1);
  if (d > s) return 0;
  return count_trees_root_degree_recurrence(s, d - 1) - count_trees_root_degree_recurrence(s - 1, d - 2);
}

BigCount count_trees_with_exit_degree_ge(unsigned s, unsigned d) {
  if (d == 0) throw std::domain_error("exit degree threshold must be at least 1");
  if (d > s) return 0;
  std::vector<bool> allowed(s + 1, false);
  for (unsigned j = 0; j < d; ++j) allowed[j] = true;
  return catalan(s) - count_trees_degree_set(s, allowed);
}

BigCount count_trees_with_exit_degree_eq(unsigned s, unsigned d) {
  if (d == 0) throw std::domain_error("exit degree must be at least 1");
  if (d > s) return 0;
  std::vector<bool> allowed(s + 1, true);
  allowed[d] = false;
  return catalan(s) - count_trees_degree_set(s, allowed);
}

Rational lemma54_bound_exact(unsigned s, unsigned d) {
  if (d < 2) throw std::domain_error("lemma 5.4 bound needs d >= 2");
  Rational r(BigCount(2 * s + 1) * catalan(s));
  return r * rpow(ratio(3, 4), d - 2);
}

long double lemma54_bound(unsigned s, unsigned d) { return to_long_double(lemma54_bound_exact(s, d)); }

namespace {

std::vector<BigCount> binomial_row(unsigned n) {
  std::vector<BigCount> row(n + 1);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    row[i] = row[i - 1] * (n - i + 1);
    mpz_divexact_ui(row[i].get_mpz_t(), row[i].get_mpz_t(), i);
  }
  return row;
}

BigCount reflection_count(const std::vector<BigCount>& row, long k, long h) {
  auto c = [&](long i) -> BigCount { return (i < 0 || i > 2 * k) ? BigCount(0) : row[i]; };
  BigCount total = 0;
  long period = h + 2;
  long jmax = k / period + 1;
  for (long j = -jmax; j <= jmax; ++j) {
    total += c(k + j * period);
    total -= c(k + 1 + j * period);
  }
  return total;
}

}  // namespace

BigCount count_paths_height_le(int k, int h) {
  if (k < 0 || h < 0) return k == 0 ? 1 : 0;
  return reflection_count(binomial_row(2 * k), k, h);
}

HeightDistribution height_distribution(int k) {
  if (k < 1) throw std::domain_error("height distribution needs k >= 1");
  HeightDistribution d;
  d.k = k;
  auto row = binomial_row(2 * static_cast<unsigned>(k));
  BigCount tk = catalan(k);
  d.count.assign(k + 1, 0);
  BigCount prev = 0, total = 0;
  for (int m = 0; m <= k; ++m) {
    BigCount le = reflection_count(row, k, m);
    d.count[m] = le - prev;
    total += d.count[m];
    prev = le;
  }
  if (total != tk) throw std::logic_error("height distribution does not sum to the Catalan number");
  d.probability.assign(k + 1, 0.0L);
  long double norm = 0.0L;
  for (int m = 0; m <= k; ++m) {
    if (d.count[m] == 0) continue;
    d.probability[m] = to_long_double(ratio(d.count[m], tk));
    norm += d.probability[m];
  }
  for (auto& p : d.probability) p /= norm;
  return d;
}

long double HeightDistribution::mean() const {
  long double acc = 0.0L;
  for (size_t m = 0; m < probability.size(); ++m) acc += static_cast<long double>(m) * probability[m];
  return acc;
}

long double excursion_functional(const HeightDistribution& dist, long double tau) {
  long double scale = tau / std::sqrt(static_cast<long double>(dist.k));
  long double acc = 0.0L, norm = 0.0L;
  for (size_t m = 0; m < dist.probability.size(); ++m) {
    long double p = dist.probability[m];
    if (p == 0.0L) continue;
    acc += p * std::exp(scale * static_cast<long double>(m));
    norm += p;
  }
  return acc / norm;
}

long double excursion_functional(int k, long double tau) { return excursion_functional(height_distribution(k), tau); }

}  // namespace momentlab
