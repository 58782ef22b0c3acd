#include "momentlab/ensemble.hpp"

#include "momentlab/rng.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace momentlab {

void EnsembleConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ensemble needs n >= 1");
  if (n > 65535) throw std::invalid_argument("ensemble n must fit the 32-bit entry counter");
  law.validate();
  if (!law.can_sample()) throw std::invalid_argument("cannot sample from " + law.name());
  if (goe && law.kind != LawKind::Gaussian) throw std::invalid_argument("GOE needs a Gaussian law");
  if (c && !(*c >= 1.0 && *c <= static_cast<double>(n))) throw std::invalid_argument("dilution needs 1 <= c <= n");
  if (trunc_delta && !(*trunc_delta > 0.0 && *trunc_delta < 1.0 / trunc_eta))
    throw std::invalid_argument("truncation needs 0 < delta < 1/eta");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
}

long double EnsembleConfig::truncation_level() const {
  if (!trunc_delta) return std::numeric_limits<long double>::infinity();
  return std::pow(static_cast<long double>(n), 1.0L / trunc_eta - *trunc_delta);
}

std::string EnsembleConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "n=" << n << ";law=" << law.name() << ";goe=" << goe;
  if (trunc_delta) os << ";trunc=" << *trunc_delta << "/" << trunc_eta;
  if (c) os << ";c=" << *c;
  os << ";seed=" << seed;
  return os.str();
}

std::string sha256_hex(const std::string& text, int hex_digits) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str().substr(0, hex_digits);
}

std::string EnsembleConfig::fingerprint() const { return sha256_hex(canonical(), 16); }

namespace {

Philox4x32::Counter counter(std::uint64_t index, std::uint64_t replicate, Stream stream) {
  return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(replicate),
          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(replicate >> 32)};
}

}  // namespace

double draw_entry(const EnsembleConfig& cfg, std::uint64_t replicate, long i, long j) {
  if (i > j) std::swap(i, j);
  Philox4x32 gen(cfg.seed);
  auto r = gen(counter(static_cast<std::uint64_t>(i) * cfg.n + j, replicate, Stream::Value));
  double a = cfg.law.sample(open_unit(r[0], r[1]), open_unit(r[2], r[3]));
  if (cfg.goe && i == j) a *= std::sqrt(2.0);
  if (cfg.trunc_delta && std::fabs(a) > cfg.truncation_level()) a = 0.0;
  return a;
}

Eigen::MatrixXd sample_matrix(const EnsembleConfig& cfg, std::uint64_t replicate) {
  const long n = cfg.n;
  Eigen::MatrixXd m(n, n);
  Philox4x32 gen(cfg.seed);
  const double scale = cfg.c ? 1.0 / std::sqrt(*cfg.c) : 1.0 / std::sqrt(static_cast<double>(n));
  const double keep = cfg.c ? *cfg.c / n : 1.0;
  for (long i = 0; i < n; ++i) {
    for (long j = i; j < n; ++j) {
      double a = draw_entry(cfg, replicate, i, j);
      if (cfg.c) {
        auto r = gen(counter(static_cast<std::uint64_t>(i) * n + j, replicate, Stream::Mask));
        if (!(open_unit(r[0], r[1]) < keep)) a = 0.0;
      }
      m(i, j) = m(j, i) = a * scale;
    }
  }
  return m;
}

SpectralRow spectral_stats(const Eigen::MatrixXd& a, const std::vector<int>& s_list, bool check_residual) {
  SpectralRow row;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, check_residual ? Eigen::ComputeEigenvectors
                                                                      : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    row.ok = false;
    return row;
  }
  const auto& ev = es.eigenvalues();
  const long n = ev.size();
  row.lambda_max = n ? std::max(std::fabs(ev(0)), std::fabs(ev(n - 1))) : 0.0;
  for (int s : s_list) {
    long double t = 0.0L;
    for (long k = 0; k < n; ++k) t += std::pow(static_cast<long double>(ev(k)), 2 * s);
    row.traces.push_back(t);
  }
  if (check_residual && n) {
    long k = std::fabs(ev(0)) > std::fabs(ev(n - 1)) ? 0 : n - 1;
    Eigen::VectorXd v = es.eigenvectors().col(k);
    double norm = row.lambda_max > 0 ? row.lambda_max : 1.0;
    row.residual = (a * v - ev(k) * v).norm() / norm;
    if (!(row.residual <= 1e-10)) row.ok = false;
  }
  return row;
}

long double trace_power_direct(const Eigen::MatrixXd& a, int s) {
  Eigen::MatrixXd sq = a * a;
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int k = 0; k < s; ++k) p = p * sq;
  return p.trace();
}

double z_for(double confidence) {
  boost::math::normal nd;
  return boost::math::quantile(nd, 0.5 + confidence / 2.0);
}

MeanCI mean_ci(const std::vector<double>& x, double confidence) {
  MeanCI m;
  m.count = static_cast<long>(x.size());
  if (x.empty()) return m;
  long double sum = 0.0L;
  for (double v : x) sum += v;
  long double mean = sum / m.count;
  long double ss = 0.0L;
  for (double v : x) ss += (v - mean) * (v - mean);
  m.mean = static_cast<double>(mean);
  m.variance = m.count > 1 ? static_cast<double>(ss / (m.count - 1)) : 0.0;
  m.se = std::sqrt(m.variance / m.count);
  double z = z_for(confidence);
  m.lo = m.mean - z * m.se;
  m.hi = m.mean + z * m.se;
  return m;
}

Proportion wilson(long hits, long count, double confidence) {
  Proportion p;
  p.hits = hits;
  p.count = count;
  if (count <= 0) return p;
  double z = z_for(confidence);
  double nn = static_cast<double>(count);
  p.p = hits / nn;
  double denom = 1.0 + z * z / nn;
  double centre = (p.p + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(p.p * (1 - p.p) / nn + z * z / (4 * nn * nn)) / denom;
  p.lo = std::max(0.0, centre - half);
  p.hi = std::min(1.0, centre + half);
  return p;
}

MeanCI SampleStats::trace_mean(size_t k) const {
  std::vector<double> x(traces.at(k).begin(), traces.at(k).end());
  return mean_ci(x);
}

MeanCI SampleStats::normalized_trace_mean(size_t k, long n) const {
  std::vector<double> x;
  x.reserve(traces.at(k).size());
  for (long double t : traces[k]) x.push_back(static_cast<double>(t / n));
  return mean_ci(x);
}

SampleStats run_replicates(const EnsembleConfig& cfg, long replicates, const std::vector<int>& s_list,
                           std::uint64_t first_replicate) {
  cfg.validate();
  std::vector<SpectralRow> rows(replicates);
  auto work = [&](long begin, long end) {
    for (long r = begin; r < end; ++r) rows[r] = spectral_stats(sample_matrix(cfg, first_replicate + r), s_list);
  };
  int threads = static_cast<int>(std::min<long>(cfg.threads, std::max<long>(replicates, 1)));
  if (threads <= 1) {
    work(0, replicates);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, replicates * t / threads, replicates * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  SampleStats st;
  st.fingerprint = cfg.fingerprint();
  st.s_list = s_list;
  st.traces.assign(s_list.size(), {});
  for (const auto& row : rows) {
    if (!row.ok) {
      ++st.flagged;
      continue;
    }
    st.lambda_max.push_back(row.lambda_max);
    for (size_t k = 0; k < s_list.size(); ++k) st.traces[k].push_back(row.traces[k]);
  }
  st.replicates = static_cast<long>(st.lambda_max.size());
  return st;
}

void write_samples_csv(std::ostream& out, const SampleStats& st) {
  out << "# fingerprint=" << st.fingerprint << " flagged=" << st.flagged << '\n';
  out << "replicate,lambda_max";
  for (int s : st.s_list) out << ",tr_" << 2 * s;
  out << '\n';
  char buf[64];
  for (size_t r = 0; r < st.lambda_max.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", st.lambda_max[r]);
    out << r << ',' << buf;
    for (const auto& col : st.traces) {
      std::snprintf(buf, sizeof buf, "%.21Lg", col[r]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

bool TailCurve::nonincreasing() const {
  for (size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i - 1].exceed;
    const auto& b = points[i].exceed;
    if (points[i].x < points[i - 1].x) continue;
    double slack = (a.hi - a.lo) / 2 + (b.hi - b.lo) / 2;
    if (b.p > a.p + slack) return false;
  }
  return true;
}

TailCurve tail_curve(const EnsembleConfig& cfg, const std::vector<double>& x_grid, TailScale scale, long replicates,
                     int chebyshev_s) {
  if (replicates < 100) throw std::invalid_argument("tail curves need at least 100 replicates");
  if (scale == TailScale::Dilute && !cfg.c) throw std::invalid_argument("dilute scale needs a diluted ensemble");
  std::vector<int> s_list;
  if (chebyshev_s > 0) s_list.push_back(chebyshev_s);
  SampleStats st = run_replicates(cfg, replicates, s_list);
  TailCurve tc;
  tc.fingerprint = st.fingerprint;
  tc.scale = scale;
  tc.replicates = st.replicates;
  tc.chebyshev_s = chebyshev_s;
  double step = scale == TailScale::Wigner ? std::pow(static_cast<double>(cfg.n), -2.0 / 3.0) : 1.0 / *cfg.c;
  std::optional<double> moment;
  if (chebyshev_s > 0) moment = st.trace_mean(0).mean;
  for (double x : x_grid) {
    TailPoint pt;
    pt.x = x;
    pt.threshold = 2.0 * cfg.law.v * (1.0 + x * step);
    long hits = std::count_if(st.lambda_max.begin(), st.lambda_max.end(), [&](double l) { return l > pt.threshold; });
    pt.exceed = wilson(hits, st.replicates);
    if (moment && pt.threshold > 0) pt.chebyshev = *moment / std::pow(pt.threshold, 2 * chebyshev_s);
    tc.points.push_back(pt);
  }
  return tc;
}

UniversalityReport universality_compare(const EnsembleConfig& a, const EnsembleConfig& b, int s, long replicates) {
  if (a.n != b.n || a.law.v != b.law.v) throw std::invalid_argument("universality comparison needs matching n and v");
  UniversalityReport u;
  u.s = s;
  u.a = run_replicates(a, replicates, {s}).normalized_trace_mean(0, a.n);
  u.b = run_replicates(b, replicates, {s}).normalized_trace_mean(0, b.n);
  u.diff = u.a.mean - u.b.mean;
  u.se = std::sqrt(u.a.se * u.a.se + u.b.se * u.b.se);
  u.z = u.se > 0 ? u.diff / u.se : (u.diff == 0 ? 0.0 : std::copysign(INFINITY, u.diff));
  u.agree = std::fabs(u.z) <= 3.0;
  return u;
}

TruncationReport truncation_event_rate(const EnsembleConfig& cfg, long replicates, double p) {
  cfg.validate();
  if (!cfg.trunc_delta) throw std::invalid_argument("truncation rate needs a truncation level");
  EnsembleConfig raw = cfg;
  raw.trunc_delta.reset();
  const long double U = cfg.truncation_level();
  std::vector<char> hit(replicates, 0);
  auto work = [&](long begin, long end) {
    for (long r = begin; r < end; ++r) {
      for (long i = 0; i < cfg.n && !hit[r]; ++i)
        for (long j = i; j < cfg.n; ++j)
          if (std::fabs(draw_entry(raw, r, i, j)) > U) {
            hit[r] = 1;
            break;
          }
    }
  };
  int threads = static_cast<int>(std::min<long>(cfg.threads, std::max<long>(replicates, 1)));
  if (threads <= 1) {
    work(0, replicates);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, replicates * t / threads, replicates * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  TruncationReport rep;
  rep.rate = wilson(std::count(hit.begin(), hit.end(), 1), replicates);
  rep.U = static_cast<double>(U);
  rep.p = p;
  rep.bound = static_cast<double>(static_cast<long double>(cfg.n) * cfg.n * cfg.law.abs_moment(p) / std::pow(U, p));
  rep.within = rep.rate.lo <= rep.bound;
  return rep;
}

nlohmann::json to_json(const MeanCI& m) {
  return {{"count", m.count}, {"mean", m.mean}, {"variance", m.variance}, {"se", m.se}, {"lo", m.lo}, {"hi", m.hi}};
}

nlohmann::json to_json(const Proportion& p) {
  return {{"hits", p.hits}, {"count", p.count}, {"p", p.p}, {"lo", p.lo}, {"hi", p.hi}};
}

nlohmann::json to_json(const TailCurve& t) {
  nlohmann::json j;
  j["fingerprint"] = t.fingerprint;
  j["scale"] = t.scale == TailScale::Wigner ? "n^-2/3" : "1/c";
  j["replicates"] = t.replicates;
  j["chebyshev_s"] = t.chebyshev_s;
  j["nonincreasing"] = t.nonincreasing();
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : t.points) {
    nlohmann::json q = {{"x", p.x}, {"threshold", p.threshold}, {"exceed", to_json(p.exceed)}};
    if (p.chebyshev) q["chebyshev"] = *p.chebyshev;
    pts.push_back(q);
  }
  j["points"] = pts;
  return j;
}

nlohmann::json to_json(const UniversalityReport& u) {
  return {{"s", u.s},   {"a", to_json(u.a)}, {"b", to_json(u.b)},   {"diff", u.diff},
          {"se", u.se}, {"z", u.z},          {"agree", u.agree}};
}

nlohmann::json to_json(const TruncationReport& t) {
  return {{"rate", to_json(t.rate)}, {"U", t.U}, {"bound", t.bound}, {"p", t.p}, {"within", t.within}};
}

}  // namespace momentlab
