#include "momentlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace momentlab {

namespace {

constexpr double kE = 2.718281828459045235360287;

// Neumaier compensated sum; the order of add() calls fixes the result.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + c_; }

 private:
  long double sum_ = 0.0L, c_ = 0.0L;
};

long double checked(const std::vector<long double>& v, int m, const char* what) {
  if (m < 0 || m >= static_cast<int>(v.size()) || !std::isfinite(v[m]))
    throw std::domain_error(std::string("spec lacks ") + what + " moment of order " + std::to_string(2 * m));
  return v[m];
}

std::vector<long double> law_moments(const EntryLaw& law, int max_s, long double scale2 = 1.0L) {
  std::vector<long double> out(max_s + 1);
  for (int m = 0; m <= max_s; ++m) {
    try {
      out[m] = law.moment(2 * m) * std::pow(scale2, m);
    } catch (const std::domain_error&) {
      out[m] = std::numeric_limits<long double>::infinity();
    }
  }
  return out;
}

std::optional<std::vector<Rational>> law_moments_exact(const EntryLaw& law, int max_s, long scale2 = 1) {
  std::vector<Rational> out(max_s + 1);
  for (int m = 0; m <= max_s; ++m) {
    std::optional<Rational> x;
    try {
      x = law.exact_moment(2 * m);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    if (!x) return std::nullopt;
    out[m] = *x * rpow(Rational(scale2), m);
  }
  return out;
}

}  // namespace

long double MomentSpec::edge_moment(int M, bool loop, long n) const {
  if (M % 2) return 0.0L;
  int m = M / 2;
  long double raw = loop ? checked(diag, m, "diagonal") : checked(off, m, "off-diagonal");
  if (kind == EnsembleKind::Wigner) return raw / std::pow(static_cast<long double>(n), m);
  long double cm = std::pow(static_cast<long double>(c), m);
  if (loop && !dilute_diagonal) return raw / cm;
  return raw * (static_cast<long double>(c) / n) / cm;
}

Rational MomentSpec::edge_moment_exact(int M, bool loop, long n) const {
  if (!has_exact()) throw std::domain_error("spec has no exact moments");
  if (M % 2) return 0;
  size_t m = M / 2;
  const auto& v = loop ? *diag_exact : *off_exact;
  if (m >= v.size()) throw std::domain_error("spec lacks moment of order " + std::to_string(M));
  if (kind == EnsembleKind::Wigner) return v[m] / rpow(Rational(n), m);
  Rational C = from_double(c);
  if (loop && !dilute_diagonal) return v[m] / rpow(C, m);
  return v[m] * (C / n) / rpow(C, m);
}


MomentSpec wigner_spec(const EntryLaw& law, int max_s, bool goe_diagonal) {
  MomentSpec spec;
  spec.kind = EnsembleKind::Wigner;
  spec.descriptor = "wigner:" + law.name() + (goe_diagonal ? ":goe-diagonal" : "");
  spec.off = law_moments(law, max_s);
  if (goe_diagonal) {
    EntryLaw g = EntryLaw::gaussian(law.v);
    spec.diag = law_moments(g, max_s, 2.0L);
    spec.off_exact = law_moments_exact(law, max_s);
    spec.diag_exact = law_moments_exact(g, max_s, 2);
  } else {
    spec.diag = spec.off;
    spec.off_exact = law_moments_exact(law, max_s);
    spec.diag_exact = spec.off_exact;
  }
  if (!spec.off_exact || !spec.diag_exact) spec.off_exact = spec.diag_exact = std::nullopt;
  return spec;
}

MomentSpec truncated_spec(const EntryLaw& law, long double U, int max_s) {
  MomentSpec spec;
  spec.kind = EnsembleKind::Wigner;
  spec.descriptor = "truncated:" + law.name() + ":U=" + std::to_string(static_cast<double>(U));
  spec.off.resize(max_s + 1);
  for (int m = 0; m <= max_s; ++m) spec.off[m] = m == 0 ? 1.0L : law.truncated_moment(2 * m, U);
  spec.diag = spec.off;
  if (law.kind == LawKind::Rademacher) {
    if (law.v <= U) {
      spec.off_exact = law_moments_exact(law, max_s);
    } else {
      spec.off_exact = std::vector<Rational>(max_s + 1, Rational(0));
      (*spec.off_exact)[0] = 1;
    }
    spec.diag_exact = spec.off_exact;
  }
  return spec;
}

MomentSpec dilute_spec(const EntryLaw& law, double c, int max_s, bool dilute_diagonal) {
  if (!(c > 0.0)) throw std::invalid_argument("dilute spec needs c > 0");
  MomentSpec spec = wigner_spec(law, max_s);
  spec.kind = EnsembleKind::Dilute;
  spec.c = c;
  spec.dilute_diagonal = dilute_diagonal;
  std::ostringstream os;
  os.precision(17);
  os << "dilute:" << law.name() << ":c=" << c << (dilute_diagonal ? "" : ":undiluted-diagonal");
  spec.descriptor = os.str();
  return spec;
}

long double TruncationSpec::level(long n) const {
  return std::pow(static_cast<long double>(n), 1.0L / eta - delta);
}

std::vector<long double> truncated_moments(const TruncationSpec& t, long n, int max_m) {
  long double U = t.level(n);
  std::vector<long double> out(max_m + 1);
  for (int m = 0; m <= max_m; ++m) out[m] = m == 0 ? 1.0L : t.base.truncated_moment(2 * m, U);
  return out;
}

long double semicircle_moment(int l, long double v) {
  if (!(v > 0)) throw std::domain_error("semicircle moment needs v > 0");
  if (l % 2) return 0.0L;
  return std::pow(v, l) * to_long_double(catalan(l / 2));
}

Rational semicircle_moment_exact(int l, const Rational& v2) {
  if (l % 2) return 0;
  return rpow(v2, l / 2) * Rational(catalan(l / 2));
}

int WalkClassKey::max_passes() const {
  int m = 0;
  for (const auto& e : edges) m = std::max(m, e.first);
  return m;
}

MomentCensus moment_census(int s, int ceiling) {
  MomentCensus c;
  c.s = s;
  for_each_even_walk(
      s, WalkFilter{},
      [&](const Walk& w) {
        WalkGraph g = build_graph(w);
        WalkClassKey key;
        for (const auto& e : g.frame) key.edges.emplace_back(e.passes, e.loop());
        std::sort(key.edges.begin(), key.edges.end());
        key.vertices = g.vertex_count;
        key.max_exit_degree = g.max_exit_degree;
        ++c.classes[key];
        ++c.walks;
      },
      ceiling);
  return c;
}

namespace {

struct ClassTerm {
  long double value;
  std::optional<Rational> exact;
};

ClassTerm class_term(long n, const WalkClassKey& key, long long count, const MomentSpec& spec, bool exact) {
  long double w = static_cast<long double>(count);
  for (long i = 0; i < key.vertices; ++i) w *= static_cast<long double>(n - i);
  if (key.vertices > n) return ClassTerm{0.0L, exact ? std::optional<Rational>(0) : std::nullopt};
  for (const auto& [passes, loop] : key.edges) w *= spec.edge_moment(passes, loop, n);
  ClassTerm t{w, std::nullopt};
  if (exact) {
    Rational x(falling_factorial(n, key.vertices) * BigCount(std::to_string(count)));
    for (const auto& [passes, loop] : key.edges) x *= spec.edge_moment_exact(passes, loop, n);
    t.exact = x;
  }
  return t;
}

MomentResult run_sum(long n, const MomentCensus& census, const MomentSpec& spec, const ZParts* z) {
  if (n < 1) throw std::invalid_argument("matrix size must be at least 1");
  MomentResult r;
  r.n = n;
  r.s = census.s;
  r.spec = spec.descriptor;
  bool exact = spec.has_exact();
  CompensatedSum total;
  CompensatedSum zsum[4];
  std::map<int, CompensatedSum> by_nu;
  Rational total_exact = 0;
  ZParts parts;
  if (z) parts = *z;
  for (int i = 0; i < 4; ++i)
    if (exact) parts.z_exact[i] = Rational(0);
  for (const auto& [key, count] : census.classes) {
    ClassTerm t = class_term(n, key, count, spec, exact);
    total.add(t.value);
    by_nu[key.nu_norm(census.s)].add(t.value);
    if (exact) total_exact += *t.exact;
    if (z) {
      int part;
      if (key.nu_norm(census.s) > parts.threshold)
        part = 3;
      else if (key.max_passes() <= 2)
        part = 0;
      else if (key.max_exit_degree <= parts.degree_split)
        part = 1;
      else
        part = 2;
      zsum[part].add(t.value);
      parts.walks[part] += count;
      if (exact) *parts.z_exact[part] += *t.exact;
    }
  }
  r.total = total.value();
  if (exact) r.total_exact = total_exact;
  for (auto& [k, sum] : by_nu) r.by_nu_norm[k] = sum.value();
  if (z) {
    for (int i = 0; i < 4; ++i) parts.z[i] = zsum[i].value();
    r.zparts = parts;
  }
  return r;
}

}  // namespace

MomentResult exact_trace_moment(long n, const MomentCensus& census, const MomentSpec& spec) {
  return run_sum(n, census, spec, nullptr);
}

MomentResult exact_trace_moment(long n, int s, const MomentSpec& spec, int ceiling) {
  return exact_trace_moment(n, moment_census(s, ceiling), spec);
}

double default_C0(const MomentSpec& spec) {
  if (spec.off.size() <= 6 || !std::isfinite(spec.off[6]))
    throw std::domain_error("default C0 needs V_12; supply C0 explicitly");
  return kE * (1.0 + 8.0 * kC1 * kC1 * static_cast<double>(spec.off[6]));
}

MomentResult z_decomposition(long n, const MomentCensus& census, const MomentSpec& spec, double C0, double delta) {
  ZParts z;
  z.C0 = C0;
  z.delta = delta;
  z.threshold = C0 * census.s * census.s / static_cast<double>(n);
  z.degree_split = std::pow(static_cast<double>(n), delta);
  return run_sum(n, census, spec, &z);
}

MomentResult z_decomposition(long n, int s, const MomentSpec& spec, double C0, double delta, int ceiling) {
  return z_decomposition(n, moment_census(s, ceiling), spec, C0, delta);
}

long double dilute_lower_bound(long n, int s, double v, long double V4, double c) {
  return n * semicircle_moment(2 * s, v) * (1.0L + (s - 3) * V4 / c);
}

Rational dilute_lower_bound_exact(long n, int s, const Rational& v2, const Rational& V4, const Rational& c) {
  return Rational(n) * semicircle_moment_exact(2 * s, v2) * (1 + Rational(s - 3) * V4 / c);
}

WeightCheck weight_bound_check(const WalkAnalysis& a, const EntryLaw& law, long double U) {
  WeightCheck out;
  long double w = 1.0L;
  for (const auto& e : a.graph.frame) w *= e.passes == 0 ? 1.0L : law.truncated_moment(e.passes, U);
  long double V = 1.0L;
  try {
    V = std::max(1.0L, law.moment(12));
  } catch (const std::domain_error&) {
    V = std::numeric_limits<long double>::infinity();
  }
  int s = a.graph.s;
  long double b = std::pow(4.0L, -s);
  const auto& nu = a.report.nu_counts;
  for (size_t k = 2; k < nu.size(); ++k) {
    if (!nu[k]) continue;
    long double f = 4.0L * V * std::pow(2.0L * U, 2.0L * (static_cast<long double>(k) - 2));
    b *= std::pow(f, nu[k]);
  }
  out.weight = w;
  out.bound = b;
  out.slack = w > 0 ? b / w : std::numeric_limits<long double>::infinity();
  out.pass = w <= b * (1.0L + 1e-15L);
  return out;
}

nlohmann::json to_json(const MomentResult& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["s"] = r.s;
  j["spec"] = r.spec;
  j["total"] = static_cast<double>(r.total);
  if (r.total_exact) j["total_exact"] = r.total_exact->get_str();
  nlohmann::json by = nlohmann::json::object();
  for (const auto& [k, v] : r.by_nu_norm) by[std::to_string(k)] = static_cast<double>(v);
  j["by_nu_norm"] = by;
  if (r.zparts) {
    const auto& z = *r.zparts;
    nlohmann::json zj;
    for (int i = 0; i < 4; ++i) {
      std::string name = "Z" + std::to_string(i + 1);
      zj[name] = static_cast<double>(z.z[i]);
      zj[name + "_walks"] = z.walks[i];
      if (z.z_exact[i]) zj[name + "_exact"] = z.z_exact[i]->get_str();
    }
    zj["C0"] = z.C0;
    zj["delta"] = z.delta;
    zj["threshold"] = z.threshold;
    zj["degree_split"] = z.degree_split;
    zj["Z1_fraction"] = r.total != 0 ? static_cast<double>(z.z[0] / r.total) : 0.0;
    j["zparts"] = zj;
  }
  return j;
}

}  // namespace momentlab
