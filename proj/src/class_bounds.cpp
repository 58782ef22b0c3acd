#include "momentlab/class_bounds.hpp"

#include <sstream>

namespace momentlab {

std::vector<int> trim_counts(std::vector<int> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

int MuSignature::mu_norm() const {
  int acc = 0;
  for (size_t m = 2; m < mu.size(); ++m) acc += static_cast<int>(m - 1) * mu[m];
  return acc;
}

NuSignature classify_nu(const WalkAnalysis& a) {
  NuSignature sig;
  sig.theta = a.graph.theta;
  sig.nu = trim_counts(a.report.nu_counts);
  sig.r = a.report.r;
  sig.p = a.report.p;
  sig.d = a.graph.max_exit_degree;
  return sig;
}

MuSignature classify_mu(const WalkAnalysis& a, int k0) {
  MuSignature sig;
  sig.theta = a.graph.theta;
  sig.mu = trim_counts(a.mu.mu_counts);
  sig.p_prime = a.mu.p_prime;
  sig.p_double = a.mu.p_double;
  sig.q = trim_counts(a.mu.q_counts());
  sig.r = a.report.r;
  sig.d = a.graph.max_exit_degree;
  sig.k0 = k0;
  for (int k : a.report.kappa_nu)
    if (k > k0) sig.within_k0 = false;
  return sig;
}

namespace {

Rational rfact(unsigned long k) { return Rational(factorial(k)); }

// x^e / e!
Rational term(const Rational& x, int e) { return rpow(x, e) / rfact(e); }

}  // namespace

PsiValue psi_bound(int s, const std::vector<int>& nu, int N) {
  if (s < 0 || N < 0) throw std::domain_error("negative argument to psi");
  long used = N;
  for (size_t k = 2; k < nu.size(); ++k) {
    if (nu[k] < 0) throw std::domain_error("negative nu");
    used += static_cast<long>(k) * nu[k];
  }
  if (used > s) throw std::domain_error("infeasible nu: more instants than s");
  BigCount den = factorial(s - used) * factorial(N);
  Rational bound = term(Rational(s), N);
  for (size_t k = 2; k < nu.size(); ++k) {
    BigCount kf = factorial(k);
    BigCount kp;
    mpz_pow_ui(kp.get_mpz_t(), kf.get_mpz_t(), nu[k]);
    den *= kp * factorial(nu[k]);
    bound *= term(rpow(Rational(s), k) / Rational(kf), nu[k]);
  }
  return PsiValue{factorial(s) / den, bound};
}

Rational ss_bound(const NuSignature& sig, int H) {
  int s = sig.s();
  int free2 = sig.nu_k(2) - sig.r - sig.p;
  if (free2 < 0) throw std::domain_error("r + p exceeds nu_2");
  Rational S(s);
  Rational out = term(S * S / 2, free2);
  out *= term(6 * S * H, sig.r);
  out *= term(S * sig.d, sig.p);
  for (int k = 3; k < static_cast<int>(sig.nu.size()); ++k) {
    Rational upsilon = rpow(Rational(2 * k), k);
    out *= term(rpow(S, k) * upsilon / rfact(k), sig.nu[k]);
  }
  return out;
}

Rational upsilon_bound(const NuSignature& sig) {
  Rational S(sig.s());
  Rational out = 1;
  for (int k = 2; k < static_cast<int>(sig.nu.size()); ++k)
    out *= term(rpow(S, k) * rpow(Rational(2 * k), k) / rfact(k), sig.nu[k]);
  return out;
}

std::string mu_bound_refusal(const MuSignature& sig) {
  int s = sig.s();
  if (6 * sig.mu_norm() > s - 1) return "|mu|_1 = " + std::to_string(sig.mu_norm()) + " exceeds (s-1)/6";
  if (!sig.within_k0) return "some kappa_nu exceeds k0 = " + std::to_string(sig.k0);
  if (static_cast<int>(sig.mu.size()) > sig.k0 + 1) return "some kappa_mu exceeds k0";
  if (sig.r > sig.mu_m(2)) return "r exceeds mu_2";
  return {};
}

Rational mu_bound_formula(const MuSignature& sig, int H) {
  int s = sig.s();
  if (sig.r > sig.mu_m(2)) throw std::domain_error("r exceeds mu_2");
  Rational S(s), D(sig.d);
  int k0 = sig.k0;
  Rational out = term(S * S / 2, sig.mu_m(2) - sig.r);
  out *= term(2 * S * H, sig.r);
  for (int m = 3; m <= k0; ++m) out *= term(rpow(S, m) / rfact(m), sig.mu_m(m));
  out *= term(S * D, sig.p_prime);
  if (sig.p_double > 0) {
    if (s == 0) throw std::domain_error("P'' > 0 at s = 0");
    out *= term(Rational(sig.mu_norm()) * D / S, sig.p_double);
  }
  int qtotal = 0;
  for (size_t j = 0; j < sig.q.size(); ++j) {
    Rational base = j == 0 ? Rational(sig.p_prime + sig.p_double) : Rational(sig.q[j - 1]);
    out *= term(base * D, sig.q[j]);
    qtotal += sig.q[j];
  }
  // Upsilon_{k0} of the companion display.
  out *= rpow(Rational(3), sig.r);
  out *= rpow(Rational(2 * k0), 4 * sig.p_prime + qtotal);
  out *= rpow(Rational(2), 6 * sig.mu_m(3));
  for (int m = 4; m <= k0; ++m) out *= rpow(Rational(2 * k0), m * sig.mu_m(m));
  return out;
}

Rational mu_bound(const MuSignature& sig, int H) {
  std::string why = mu_bound_refusal(sig);
  if (!why.empty()) throw BoundNotApplicable("mu bound not claimed: " + why);
  return mu_bound_formula(sig, H);
}

ClassCensus class_census(int s, int k0, bool allow_loops, int ceiling) {
  ClassCensus c;
  c.s = s;
  c.k0 = k0;
  for_each_even_walk(
      s, WalkFilter{allow_loops, false},
      [&](const Walk& w) {
        WalkAnalysis a = analyze(w);
        ++c.total;
        ++c.nu_classes[classify_nu(a)];
        ++c.mu_classes[classify_mu(a, k0)];
      },
      ceiling);
  return c;
}

BigCount exact_class_size(const ClassCensus& census, const NuSignature& sig) {
  auto it = census.nu_classes.find(sig);
  return it == census.nu_classes.end() ? BigCount(0) : it->second;
}

BigCount exact_class_size(const ClassCensus& census, const MuSignature& sig) {
  auto it = census.mu_classes.find(sig);
  return it == census.mu_classes.end() ? BigCount(0) : it->second;
}

BigCount exact_class_size(int s, const NuSignature& sig, int ceiling) {
  BigCount n = 0;
  if (sig.s() != s) return n;
  for_each_even_walk(
      s, WalkFilter{},
      [&](const Walk& w) {
        if (classify_nu(analyze(w)) == sig) ++n;
      },
      ceiling);
  return n;
}

BigCount exact_class_size(int s, const MuSignature& sig, int ceiling) {
  BigCount n = 0;
  if (sig.s() != s) return n;
  for_each_even_walk(
      s, WalkFilter{},
      [&](const Walk& w) {
        if (classify_mu(analyze(w), sig.k0) == sig) ++n;
      },
      ceiling);
  return n;
}

namespace {

std::string join(const std::vector<int>& v, size_t from) {
  std::string out;
  for (size_t i = from; i < v.size(); ++i) {
    if (i > from) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string slack(const Rational& bound, const BigCount& exact) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(to_long_double(bound / Rational(exact)));
  return os.str();
}

}  // namespace

std::string describe(const NuSignature& sig) {
  return "theta=" + sig.theta.str() + " nu[2..]=(" + join(sig.nu, 2) + ") r=" + std::to_string(sig.r) +
         " p=" + std::to_string(sig.p) + " d=" + std::to_string(sig.d);
}

std::string describe(const MuSignature& sig) {
  return "theta=" + sig.theta.str() + " mu[1..]=(" + join(sig.mu, 1) + ") P'=" + std::to_string(sig.p_prime) +
         " P''=" + std::to_string(sig.p_double) + " Q=(" + join(sig.q, 0) + ") r=" + std::to_string(sig.r) +
         " d=" + std::to_string(sig.d) + " k0=" + std::to_string(sig.k0) + (sig.within_k0 ? "" : " kappa>k0");
}

void write_census_csv(std::ostream& out, const ClassCensus& census) {
  out << "family,theta,signature,exact,bound,slack,applicable\n";
  for (const auto& [sig, n] : census.nu_classes) {
    Rational b = ss_bound(sig);
    out << "nu," << sig.theta.str() << ",\"nu[2..]=(" << join(sig.nu, 2) << ") r=" << sig.r << " p=" << sig.p
        << " d=" << sig.d << "\"," << n << ',' << b << ',' << slack(b, n) << ",1\n";
  }
  for (const auto& [sig, n] : census.mu_classes) {
    std::string why = mu_bound_refusal(sig);
    out << "mu," << sig.theta.str() << ",\"mu[1..]=(" << join(sig.mu, 1) << ") P'=" << sig.p_prime
        << " P''=" << sig.p_double << " Q=(" << join(sig.q, 0) << ") r=" << sig.r << " d=" << sig.d
        << " k0=" << sig.k0 << (sig.within_k0 ? "" : " kappa>k0") << "\"," << n << ',';
    if (why.empty()) {
      Rational b = mu_bound_formula(sig, sig.theta.max_height());
      out << b << ',' << slack(b, n) << ",1\n";
    } else {
      out << ",,0\n";
    }
  }
}

}  // namespace momentlab
