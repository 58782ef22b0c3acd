#include "cli.hpp"

#include "momentlab/class_bounds.hpp"
#include "momentlab/dyck.hpp"
#include "momentlab/ensemble.hpp"
#include "momentlab/genfun.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#ifndef MOMENTLAB_VERSION
#define MOMENTLAB_VERSION "0.0.0"
#endif

namespace momentlab::cli {

using nlohmann::json;

std::string version() { return MOMENTLAB_VERSION; }

std::string RunConfig::canonical() const {
  std::string s = subcommand;
  for (const auto& [k, v] : params) s += ";" + k + "=" + v;
  return s;
}

std::string RunConfig::fingerprint() const { return sha256_hex(canonical(), 16); }

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 20240917;
  long replicates = 1000;
  std::optional<long> n;
  std::optional<int> s;
  std::string ensemble = "gaussian";
  double v = 1.0;
  std::optional<double> c;
  std::optional<double> delta;
  std::optional<double> U;
  double eta = 6.0;
  double delta0 = 0.5;
  double alpha = 0.0;
  std::string moments;
  bool undiluted_diagonal = false;
  std::string out;
  std::string format;
  std::optional<int> max_halfsteps;
  bool bless = false;
  bool no_timestamp = false;
  int threads = 1;
  std::string golden;
  int k0 = 4;
  std::string walk;
  bool dyck = false, trees = false, walks = false;
  bool no_self_intersections = false, no_loops = false;
  std::string x = "-2,-1,0,1,2,4";
  std::string scale = "wigner";
  int cheb_s = 0;
  std::optional<double> C0;
  int K = 20;
  int max_m = 5;
  std::string criteria;
};

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

long need_n(const Options& o) {
  if (!o.n) throw UsageError("--n is required");
  if (*o.n < 1) throw UsageError("--n must be at least 1");
  return *o.n;
}

int need_s(const Options& o) {
  if (!o.s) throw UsageError("--s is required");
  if (*o.s < 0) throw UsageError("--s must be nonnegative");
  return *o.s;
}

EntryLaw make_law(const Options& o) {
  try {
    if (o.ensemble == "rademacher") return EntryLaw::rademacher(o.v);
    if (o.ensemble == "gaussian" || o.ensemble == "goe") return EntryLaw::gaussian(o.v);
    if (o.ensemble == "power-tail")
      return o.alpha > 0 ? EntryLaw::power_tail(o.v, o.alpha) : EntryLaw::power_tail_for(o.v, o.eta, o.delta0);
    if (o.ensemble == "custom") {
      if (o.moments.empty()) throw UsageError("--ensemble custom needs --moments V2,V4,...");
      return EntryLaw::custom_moments(parse_doubles(o.moments, "--moments"));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown ensemble '" + o.ensemble + "'");
}

std::optional<long double> truncation_level(const Options& o, long n) {
  if (o.U) return *o.U;
  if (o.delta) return std::pow(static_cast<long double>(n), 1.0L / o.eta - *o.delta);
  return std::nullopt;
}

MomentSpec make_spec(const Options& o, long n, int s) {
  EntryLaw law = make_law(o);
  int order = std::max(s, 6);
  if (law.kind == LawKind::Custom) order = std::max(s, static_cast<int>(law.custom.size()));
  if (o.ensemble == "goe") {
    if (o.c || o.delta || o.U) throw UsageError("goe cannot be combined with dilution or truncation");
    return goe_spec(o.v, order);
  }
  if (o.c) {
    if (o.delta || o.U) throw UsageError("dilution and truncation cannot be combined");
    if (!(*o.c > 0)) throw UsageError("--c must be positive");
    return dilute_spec(law, *o.c, order, !o.undiluted_diagonal);
  }
  if (auto U = truncation_level(o, n)) return truncated_spec(law, *U, order);
  return wigner_spec(law, order);
}

EnsembleConfig make_ensemble(const Options& o) {
  EnsembleConfig cfg;
  cfg.n = need_n(o);
  cfg.law = make_law(o);
  cfg.goe = o.ensemble == "goe";
  if (o.U) throw UsageError("sampling takes --delta, not --U");
  cfg.trunc_delta = o.delta;
  cfg.trunc_eta = o.eta;
  cfg.c = o.c;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Wraps results with tool version, fingerprint and optional timestamp.
class Emitter {
 public:
  Emitter(const RunConfig& rc, const Options& o, std::ostream& out) : rc_(rc), o_(o), out_(&out) {
    if (!o.out.empty()) {
      file_ = std::make_unique<std::ofstream>(o.out, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open " + o.out);
      out_ = file_.get();
    }
  }

  void emit_json(const json& result) {
    json j;
    j["tool"] = "momentlab";
    j["version"] = version();
    j["command"] = rc_.subcommand;
    j["fingerprint"] = rc_.fingerprint();
    j["config"] = rc_.params;
    if (!o_.no_timestamp) j["generated"] = timestamp();
    j["result"] = result;
    *out_ << j.dump(2) << '\n';
  }

  void emit_csv(const std::string& table, const std::vector<std::string>& notes = {}) {
    *out_ << "# momentlab " << version() << " command=" << rc_.subcommand << " fingerprint=" << rc_.fingerprint()
          << '\n';
    if (!o_.no_timestamp) *out_ << "# generated=" << timestamp() << '\n';
    for (const auto& n : notes) *out_ << "# " << n << '\n';
    *out_ << table;
  }

 private:
  const RunConfig& rc_;
  const Options& o_;
  std::ostream* out_;
  std::unique_ptr<std::ofstream> file_;
};

std::string format_of(const Options& o, const std::string& fallback) {
  std::string f = o.format.empty() ? fallback : o.format;
  if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
  return f;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string decimal(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

SuiteOptions suite_options(const Options& o) {
  SuiteOptions so;
  if (o.max_halfsteps) so.max_halfsteps = *o.max_halfsteps;
  so.seed = o.seed;
  so.threads = o.threads;
  return so;
}

std::vector<int> criteria_list(const Options& o) {
  if (o.criteria.empty()) return verify_criteria();
  if (o.criteria == "all") {
    std::vector<int> all;
    for (int i = 1; i <= kCriterionCount; ++i) all.push_back(i);
    return all;
  }
  std::vector<int> ids;
  for (double d : parse_doubles(o.criteria, "--criteria")) {
    int id = static_cast<int>(d);
    if (id != d || id < 1 || id > kCriterionCount) throw UsageError("no criterion " + decimal(d));
    ids.push_back(id);
  }
  return ids;
}

json results_json(const std::vector<CriterionResult>& rs) {
  json arr = json::array();
  for (const auto& r : rs)
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  return arr;
}

std::string results_csv(const std::vector<CriterionResult>& rs) {
  std::ostringstream os;
  os << "id,name,pass,detail\n";
  for (const auto& r : rs)
    os << r.id << ',' << csv_escape(r.name) << ',' << (r.pass ? "PASS" : "FAIL") << ',' << csv_escape(r.detail) << '\n';
  return os.str();
}

int cmd_verify(const RunConfig& rc, const Options& o, std::ostream& out, std::ostream& err) {
  std::filesystem::path dir = o.golden.empty() ? default_golden_dir() : std::filesystem::path(o.golden);
  GoldenReport g = check_golden(dir, o.bless);
  bool ok = true;
  if (o.bless) {
    err << "blessed " << g.written.size() << " golden tables in " << dir.string() << '\n';
  } else {
    std::string detail;
    for (const auto& m : g.missing) detail += " missing:" + m;
    for (const auto& m : g.mismatched) detail += " changed:" + m;
    out << (g.pass ? "PASS" : "FAIL") << " golden tables (" << dir.string() << ")" << detail << '\n';
    ok = g.pass;
  }
  std::vector<CriterionResult> rs;
  for (int id : criteria_list(o)) {
    CriterionResult r = run_criterion(id, suite_options(o));
    out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): " << r.detail << '\n';
    out.flush();
    ok = ok && r.pass;
    rs.push_back(r);
  }
  if (!o.out.empty()) {
    Emitter e(rc, o, out);
    if (format_of(o, "json") == "json")
      e.emit_json({{"golden_pass", g.pass}, {"criteria", results_json(rs)}});
    else
      e.emit_csv(results_csv(rs));
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_report(const RunConfig& rc, const Options& o, std::ostream& out) {
  std::vector<CriterionResult> rs;
  for (int id : criteria_list(o)) rs.push_back(run_criterion(id, suite_options(o)));
  Emitter e(rc, o, out);
  if (format_of(o, "json") == "json") {
    bool all = std::all_of(rs.begin(), rs.end(), [](const CriterionResult& r) { return r.pass; });
    e.emit_json({{"all_pass", all}, {"criteria", results_json(rs)}});
  } else {
    e.emit_csv(results_csv(rs));
  }
  return kExitOk;
}

int cmd_enumerate(const RunConfig& rc, const Options& o, std::ostream& out) {
  int s = need_s(o);
  int kinds = o.walks + o.dyck + o.trees;
  if (kinds > 1) throw UsageError("choose one of --walks, --dyck, --trees");
  std::vector<std::string> items;
  std::string what;
  if (o.dyck || o.trees) {
    what = o.dyck ? "dyck" : "trees";
    int ceiling = o.max_halfsteps.value_or(kDyckCeiling);
    for_each_dyck(
        s,
        [&](const DyckPath& p) {
          if (o.dyck) {
            items.push_back(p.str());
            return;
          }
          // Parent list in preorder, root = 0.
          PlaneTree t = dyck_to_tree(p);
          std::vector<int> parent(t.children.size(), -1);
          for (size_t v = 0; v < t.children.size(); ++v)
            for (int ch : t.children[v]) parent[ch] = static_cast<int>(v);
          std::string text;
          for (size_t v = 1; v < parent.size(); ++v) text += (v > 1 ? " " : "") + std::to_string(parent[v]);
          items.push_back(text);
        },
        ceiling);
  } else {
    what = "walks";
    WalkFilter f;
    f.allow_loops = !o.no_loops;
    f.tree_only = o.no_self_intersections;
    int ceiling = o.max_halfsteps ? 2 * *o.max_halfsteps : kWalkCeiling;
    for_each_even_walk(s, f, [&](const Walk& w) { items.push_back(w.str()); }, ceiling);
  }
  Emitter e(rc, o, out);
  if (format_of(o, "csv") == "json") {
    e.emit_json({{"kind", what}, {"s", s}, {"count", items.size()}, {"items", items}});
  } else {
    std::ostringstream os;
    os << "index," << (what == "trees" ? "parents" : what == "dyck" ? "path" : "walk") << '\n';
    for (size_t i = 0; i < items.size(); ++i) os << i << ',' << csv_escape(items[i]) << '\n';
    e.emit_csv(os.str(), {"count=" + std::to_string(items.size())});
  }
  return kExitOk;
}

json signature_json(const WalkAnalysis& a, int k0) {
  NuSignature nu = classify_nu(a);
  MuSignature mu = classify_mu(a, k0);
  json j;
  j["nu_signature"] = describe(nu);
  j["mu_signature"] = describe(mu);
  j["ss_bound"] = ss_bound(nu).get_str();
  std::string refusal = mu_bound_refusal(mu);
  if (refusal.empty())
    j["mu_bound"] = mu_bound(mu).get_str();
  else
    j["mu_bound_not_applicable"] = refusal;
  return j;
}

int cmd_classify(const RunConfig& rc, const Options& o, std::ostream& out) {
  Emitter e(rc, o, out);
  if (!o.walk.empty()) {
    Walk w;
    try {
      w = Walk::parse(o.walk);
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
    WalkAnalysis a = analyze(w);
    json j = to_json(a);
    j["classes"] = signature_json(a, o.k0);
    j["lemma_5_2"] = verify_lemma_5_2(a).to_json();
    j["lemma_5_5"] = verify_lemma_5_5(a).to_json();
    if (format_of(o, "json") == "csv") throw UsageError("classify --walk emits JSON only");
    e.emit_json(j);
    return kExitOk;
  }
  int s = need_s(o);
  int ceiling = o.max_halfsteps ? 2 * *o.max_halfsteps : kWalkCeiling;
  ClassCensus c = class_census(s, o.k0, !o.no_loops, ceiling);
  if (format_of(o, "csv") == "csv") {
    std::ostringstream os;
    write_census_csv(os, c);
    e.emit_csv(os.str(), {"walks=" + c.total.get_str()});
  } else {
    json nu = json::array(), mu = json::array();
    for (const auto& [sig, size] : c.nu_classes)
      nu.push_back({{"signature", describe(sig)}, {"size", size.get_str()}, {"bound", ss_bound(sig).get_str()}});
    for (const auto& [sig, size] : c.mu_classes) {
      json row = {{"signature", describe(sig)}, {"size", size.get_str()}};
      std::string why = mu_bound_refusal(sig);
      if (why.empty())
        row["bound"] = mu_bound(sig).get_str();
      else
        row["not_applicable"] = why;
      mu.push_back(row);
    }
    e.emit_json({{"s", s}, {"k0", o.k0}, {"walks", c.total.get_str()}, {"nu_classes", nu}, {"mu_classes", mu}});
  }
  return kExitOk;
}

std::string moment_csv(const MomentResult& r) {
  std::ostringstream os;
  os << "key,value\n";
  os << "n," << r.n << "\ns," << r.s << "\nspec," << csv_escape(r.spec) << "\ntotal," << decimal(r.total) << '\n';
  if (r.total_exact) os << "total_exact," << r.total_exact->get_str() << '\n';
  for (const auto& [k, v] : r.by_nu_norm) os << "nu_norm_" << k << ',' << decimal(v) << '\n';
  if (r.zparts) {
    const auto& z = *r.zparts;
    for (int i = 0; i < 4; ++i) {
      os << "Z" << i + 1 << ',' << decimal(z.z[i]) << '\n';
      os << "Z" << i + 1 << "_walks," << z.walks[i] << '\n';
      if (z.z_exact[i]) os << "Z" << i + 1 << "_exact," << z.z_exact[i]->get_str() << '\n';
    }
    os << "C0," << decimal(z.C0) << "\nthreshold," << decimal(z.threshold) << "\ndegree_split,"
       << decimal(z.degree_split) << '\n';
  }
  return os.str();
}

int cmd_moments(const RunConfig& rc, const Options& o, std::ostream& out, bool zparts) {
  long n = need_n(o);
  int s = need_s(o);
  MomentSpec spec = make_spec(o, n, s);
  int ceiling = o.max_halfsteps ? 2 * *o.max_halfsteps : kWalkCeiling;
  MomentCensus census = moment_census(s, ceiling);
  MomentResult r;
  if (zparts) {
    double C0 = o.C0 ? *o.C0 : default_C0(spec);
    double delta = o.delta.value_or(0.01);
    r = z_decomposition(n, census, spec, C0, delta);
  } else {
    r = exact_trace_moment(n, census, spec);
  }
  Emitter e(rc, o, out);
  if (format_of(o, "json") == "json") {
    json j = to_json(r);
    j["normalized"] = static_cast<double>(r.total / n);
    j["semicircle"] = static_cast<double>(semicircle_moment(2 * s, std::sqrt(static_cast<double>(spec.off[1]))));
    e.emit_json(j);
  } else {
    e.emit_csv(moment_csv(r));
  }
  return kExitOk;
}

int cmd_mc(const RunConfig& rc, const Options& o, std::ostream& out) {
  EnsembleConfig cfg = make_ensemble(o);
  if (o.replicates < 1) throw UsageError("--replicates must be positive");
  int smax = o.s.value_or(4);
  std::vector<int> s_list;
  for (int s = 1; s <= smax; ++s) s_list.push_back(s);
  SampleStats st = run_replicates(cfg, o.replicates, s_list);
  Emitter e(rc, o, out);
  if (format_of(o, "csv") == "csv") {
    std::ostringstream os;
    write_samples_csv(os, st);
    e.emit_csv(os.str());
  } else {
    json means = json::object();
    for (size_t k = 0; k < s_list.size(); ++k)
      means["tr_" + std::to_string(2 * s_list[k])] = to_json(st.trace_mean(k));
    e.emit_json({{"ensemble_fingerprint", st.fingerprint},
                 {"replicates", st.replicates},
                 {"flagged", st.flagged},
                 {"lambda_max", to_json(mean_ci(st.lambda_max))},
                 {"trace_means", means}});
  }
  return st.flagged ? kExitFailure : kExitOk;
}

int cmd_tail(const RunConfig& rc, const Options& o, std::ostream& out) {
  EnsembleConfig cfg = make_ensemble(o);
  TailScale scale;
  if (o.scale == "wigner")
    scale = TailScale::Wigner;
  else if (o.scale == "dilute")
    scale = TailScale::Dilute;
  else
    throw UsageError("--scale must be wigner or dilute");
  if (scale == TailScale::Dilute && !cfg.c) throw UsageError("--scale dilute needs --c");
  if (o.replicates < 100) throw UsageError("tail curves need --replicates >= 100");
  TailCurve tc = tail_curve(cfg, parse_doubles(o.x, "--x"), scale, o.replicates, o.cheb_s);
  Emitter e(rc, o, out);
  if (format_of(o, "csv") == "json") {
    e.emit_json(to_json(tc));
  } else {
    std::ostringstream os;
    os << "x,threshold,hits,count,p,lo,hi" << (tc.chebyshev_s ? ",chebyshev" : "") << '\n';
    for (const auto& p : tc.points) {
      os << decimal(p.x) << ',' << decimal(p.threshold) << ',' << p.exceed.hits << ',' << p.exceed.count << ','
         << decimal(p.exceed.p) << ',' << decimal(p.exceed.lo) << ',' << decimal(p.exceed.hi);
      if (p.chebyshev) os << ',' << decimal(*p.chebyshev);
      os << '\n';
    }
    e.emit_csv(os.str(), {"ensemble_fingerprint=" + tc.fingerprint});
  }
  return kExitOk;
}

int cmd_dilute(const RunConfig& rc, const Options& o, std::ostream& out) {
  EntryLaw law = make_law(o);
  if (o.delta || o.U || o.ensemble == "goe") throw UsageError("dilute takes a plain entry law");
  std::vector<int> ss = o.s ? std::vector<int>{*o.s} : std::vector<int>{3, 4, 5};
  std::vector<long> ns = o.n ? std::vector<long>{*o.n} : std::vector<long>{40, 80};
  std::vector<double> cs = o.c ? std::vector<double>{*o.c} : std::vector<double>{5, 10, 20};
  for (long n : ns)
    if (n < 1) throw UsageError("--n must be at least 1");
  for (double c : cs)
    if (!(c > 0)) throw UsageError("--c must be positive");
  bool ok = true;
  json rows = json::array();
  std::ostringstream os;
  os << "s,n,c,exact,bound,ratio,holds\n";
  int ceiling = o.max_halfsteps ? 2 * *o.max_halfsteps : kWalkCeiling;
  for (int s : ss) {
    MomentCensus census = moment_census(s, ceiling);
    for (long n : ns)
      for (double c : cs) {
        MomentResult r = exact_trace_moment(n, census, dilute_spec(law, c, std::max(s, 2), !o.undiluted_diagonal));
        bool holds;
        std::string exact, bound;
        double ratio;
        if (r.total_exact) {
          Rational lb = dilute_lower_bound_exact(n, s, *law.exact_moment(2), *law.exact_moment(4), from_double(c));
          holds = *r.total_exact >= lb;
          exact = r.total_exact->get_str();
          bound = lb.get_str();
          ratio = Rational(*r.total_exact / lb).get_d();
        } else {
          long double lb = dilute_lower_bound(n, s, law.v, law.moment(4), c);
          holds = r.total >= lb;
          exact = decimal(r.total);
          bound = decimal(lb);
          ratio = static_cast<double>(r.total / lb);
        }
        ok = ok && holds;
        rows.push_back({{"s", s}, {"n", n}, {"c", c}, {"exact", exact}, {"bound", bound}, {"ratio", ratio},
                        {"holds", holds}});
        os << s << ',' << n << ',' << decimal(c) << ',' << exact << ',' << bound << ',' << decimal(ratio) << ','
           << (holds ? "true" : "false") << '\n';
      }
  }
  Emitter e(rc, o, out);
  if (format_of(o, "csv") == "json")
    e.emit_json({{"law", law.name()}, {"rows", rows}, {"all_hold", ok}});
  else
    e.emit_csv(os.str(), {"law=" + law.name()});
  return ok ? kExitOk : kExitFailure;
}

int cmd_genfun(const RunConfig& rc, const Options& o, std::ostream& out) {
  if (o.K < 0 || o.K > 200) throw UsageError("--K must lie in [0, 200]");
  if (o.max_m < 2 || o.max_m > 12) throw UsageError("--max-m must lie in [2, 12]");
  std::ostringstream os;
  write_genfun_csv(os, o.K, o.max_m);
  Emitter e(rc, o, out);
  if (format_of(o, "csv") == "csv") {
    e.emit_csv(os.str());
    return kExitOk;
  }
  json rows = json::array();
  std::istringstream in(os.str());
  std::string line, header;
  std::getline(in, header);
  std::vector<std::string> keys;
  {
    std::stringstream hs(header);
    std::string k;
    while (std::getline(hs, k, ',')) keys.push_back(k);
  }
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    json row;
    for (size_t i = 0; std::getline(ls, cell, ','); ++i) row[keys[i]] = cell;
    rows.push_back(row);
  }
  e.emit_json({{"K", o.K}, {"max_m", o.max_m}, {"rows", rows}});
  return kExitOk;
}

// Options that never change results stay out of the fingerprint.
bool fingerprinted(const std::string& name) {
  static const std::set<std::string> skip = {"help", "config", "out", "format", "no-timestamp", "bless",
                                             "threads", "golden"};
  return !skip.count(name);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moment-method laboratory for Wigner and dilute random matrices", "momentlab"};
  app.set_version_flag("--version", version());
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;

  app.set_config("--config", "", "Read key = value lines (flag names without dashes); flags override the file");
  app.add_option("--seed", o.seed, "Master seed for Monte Carlo streams");
  app.add_option("--replicates", o.replicates, "Monte Carlo replicate count");
  app.add_option("--n", o.n, "Matrix dimension");
  app.add_option("--s", o.s, "Half length of walks / moment order 2s");
  app.add_option("--ensemble", o.ensemble, "rademacher | gaussian | goe | power-tail | custom");
  app.add_option("--v", o.v, "Entry standard deviation");
  app.add_option("--c", o.c, "Dilution concentration");
  app.add_option("--delta", o.delta, "Truncation exponent: U_n = n^{1/eta - delta}; also the n^delta degree split");
  app.add_option("--U", o.U, "Explicit truncation level for exact moments");
  app.add_option("--eta", o.eta, "Truncation exponent denominator");
  app.add_option("--delta0", o.delta0, "Moment excess for the power-tail law");
  app.add_option("--alpha", o.alpha, "Power-tail index (overrides eta/delta0)");
  app.add_option("--moments", o.moments, "Custom law: V2,V4,V6,...");
  app.add_flag("--undiluted-diagonal", o.undiluted_diagonal, "Keep the diagonal undiluted");
  app.add_option("--out", o.out, "Output path (default stdout)");
  app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--max-halfsteps", o.max_halfsteps, "Cap on s for the suites; enumeration ceiling");
  app.add_flag("--bless", o.bless, "Regenerate golden tables");
  app.add_flag("--no-timestamp", o.no_timestamp, "Omit the generation time from outputs");
  app.add_option("--threads", o.threads, "Worker threads for Monte Carlo");
  app.add_option("--golden", o.golden, "Golden table directory");
  app.add_option("--k0", o.k0, "Self-intersection cap for mu classes");
  app.add_option("--walk", o.walk, "Walk to analyze, e.g. 1,2,3,2,1");
  app.add_flag("--walks", o.walks, "Enumerate even walks (default)");
  app.add_flag("--dyck", o.dyck, "Enumerate Dyck paths");
  app.add_flag("--trees", o.trees, "Enumerate plane trees");
  app.add_flag("--no-self-intersections", o.no_self_intersections, "Only tree-structure walks");
  app.add_flag("--no-loops", o.no_loops, "Exclude loop steps");
  app.add_option("--x", o.x, "Tail grid, comma separated");
  app.add_option("--scale", o.scale, "wigner (x/n^{2/3}) | dilute (x/c)");
  app.add_option("--cheb-s", o.cheb_s, "Moment order for the Chebyshev bound column");
  app.add_option("--C0", o.C0, "Override the Z4 threshold constant");
  app.add_option("--K", o.K, "Series order for genfun");
  app.add_option("--max-m", o.max_m, "Largest m for N^(m) columns");
  app.add_option("--criteria", o.criteria, "Criterion ids (comma separated) or 'all'");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "Run the identity and bound suites and compare golden tables"},
      {"enumerate", "List walks, Dyck paths or plane trees"},
      {"classify", "Analyze one walk (--walk) or census all classes at --s"},
      {"moments", "Exact E Tr A^{2s} as a walk sum"},
      {"zparts", "Z1..Z4 decomposition of the exact moment"},
      {"mc", "Monte Carlo spectral statistics per replicate"},
      {"tail", "Empirical tail curve of lambda_max"},
      {"dilute", "Exact dilute moments against the lower bound"},
      {"genfun", "Coefficient tables of the generating functions"},
      {"report", "Run selected criteria and emit a results table"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig rc;
  rc.subcommand = app.get_subcommands().front()->get_name();
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (!fingerprinted(name) || name == "version") continue;
    std::string value;
    if (opt->count()) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) rc.params[name] = value;
  }

  try {
    const std::string& cmd = rc.subcommand;
    if (o.threads < 1) throw UsageError("--threads must be positive");
    if (o.max_halfsteps && *o.max_halfsteps < 0) throw UsageError("--max-halfsteps must be nonnegative");
    if (cmd == "verify") return cmd_verify(rc, o, out, err);
    if (cmd == "report") return cmd_report(rc, o, out);
    if (cmd == "enumerate") return cmd_enumerate(rc, o, out);
    if (cmd == "classify") return cmd_classify(rc, o, out);
    if (cmd == "moments") return cmd_moments(rc, o, out, false);
    if (cmd == "zparts") return cmd_moments(rc, o, out, true);
    if (cmd == "mc") return cmd_mc(rc, o, out);
    if (cmd == "tail") return cmd_tail(rc, o, out);
    if (cmd == "dilute") return cmd_dilute(rc, o, out);
    if (cmd == "genfun") return cmd_genfun(rc, o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace momentlab::cli
