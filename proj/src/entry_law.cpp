#include "momentlab/entry_law.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momentlab {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double double_factorial_odd(int M) {  // (M-1)!! for even M
  long double r = 1.0L;
  for (int k = M - 1; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace

EntryLaw EntryLaw::rademacher(double v) {
  EntryLaw l;
  l.kind = LawKind::Rademacher;
  l.v = v;
  l.validate();
  return l;
}

EntryLaw EntryLaw::gaussian(double v) {
  EntryLaw l;
  l.kind = LawKind::Gaussian;
  l.v = v;
  l.validate();
  return l;
}

EntryLaw EntryLaw::power_tail(double v, double alpha) {
  EntryLaw l;
  l.kind = LawKind::PowerTail;
  l.v = v;
  l.alpha = alpha;
  l.validate();
  return l;
}

EntryLaw EntryLaw::power_tail_for(double v, double eta, double delta0) {
  return power_tail(v, 2.0 * eta + 2.0 * delta0 + 2.0);
}

EntryLaw EntryLaw::custom_moments(std::vector<double> even_moments) {
  EntryLaw l;
  l.kind = LawKind::Custom;
  l.custom = std::move(even_moments);
  l.v = l.custom.empty() ? 0.0 : std::sqrt(l.custom[0]);
  l.validate();
  return l;
}

void EntryLaw::validate() const {
  if (kind == LawKind::Custom) {
    if (custom.empty()) throw std::invalid_argument("custom law needs at least V_2");
    for (double m : custom)
      if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("custom moments must be finite and positive");
    return;
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("entry law needs v > 0");
  if (kind == LawKind::PowerTail && !(alpha > 2.0)) throw std::invalid_argument("power-tail index must exceed 2");
}

std::string EntryLaw::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case LawKind::Rademacher: os << "rademacher(v=" << v << ")"; break;
    case LawKind::Gaussian: os << "gaussian(v=" << v << ")"; break;
    case LawKind::PowerTail: os << "power-tail(v=" << v << ",alpha=" << alpha << ")"; break;
    case LawKind::Custom:
      os << "custom(";
      for (size_t i = 0; i < custom.size(); ++i) os << (i ? "," : "") << custom[i];
      os << ")";
      break;
  }
  return os.str();
}

double EntryLaw::pareto_scale() const { return v * std::sqrt((alpha - 2.0) / alpha); }

long double EntryLaw::moment(int M) const {
  if (M < 0) throw std::domain_error("negative moment order");
  if (M % 2) return 0.0L;
  if (M == 0) return 1.0L;
  long double lv = v;
  switch (kind) {
    case LawKind::Rademacher: return std::pow(lv, M);
    case LawKind::Gaussian: return std::pow(lv, M) * double_factorial_odd(M);
    case LawKind::PowerTail: {
      if (M >= alpha) throw std::domain_error("power-tail moment of order " + std::to_string(M) + " is infinite");
      long double sigma = pareto_scale();
      return std::pow(sigma, M) * alpha / (alpha - M);
    }
    case LawKind::Custom: {
      size_t i = static_cast<size_t>(M / 2 - 1);
      if (i >= custom.size()) throw std::domain_error("custom law lacks V_" + std::to_string(M));
      return custom[i];
    }
  }
  return 0.0L;
}

std::optional<Rational> EntryLaw::exact_moment(int M) const {
  if (M % 2) return Rational(0);
  if (M == 0) return Rational(1);
  Rational v2 = rpow(from_double(v), 2);
  switch (kind) {
    case LawKind::Rademacher: return rpow(v2, M / 2);
    case LawKind::Gaussian: {
      BigCount df = 1;
      for (int k = M - 1; k > 1; k -= 2) df *= k;
      return rpow(v2, M / 2) * Rational(df);
    }
    case LawKind::Custom: {
      size_t i = static_cast<size_t>(M / 2 - 1);
      if (i >= custom.size()) throw std::domain_error("custom law lacks V_" + std::to_string(M));
      return from_double(custom[i]);
    }
    case LawKind::PowerTail: return std::nullopt;
  }
  return std::nullopt;
}

long double EntryLaw::abs_moment(long double p) const {
  long double lv = v;
  switch (kind) {
    case LawKind::Rademacher: return std::pow(lv, p);
    case LawKind::Gaussian:
      return std::pow(lv, p) * std::pow(2.0L, p / 2) * std::tgamma((p + 1) / 2) / std::sqrt(kPi);
    case LawKind::PowerTail:
      if (p >= alpha) throw std::domain_error("power-tail absolute moment is infinite");
      return std::pow(static_cast<long double>(pareto_scale()), p) * alpha / (alpha - p);
    case LawKind::Custom: break;
  }
  throw std::domain_error("absolute moments unavailable for a custom moment list");
}

long double EntryLaw::truncated_moment(int M, long double U) const {
  if (M % 2) return 0.0L;
  if (U < 0) return 0.0L;
  switch (kind) {
    case LawKind::Rademacher: return v <= U ? std::pow(static_cast<long double>(v), M) : 0.0L;
    case LawKind::Gaussian: {
      long double x = U * U / (2.0L * v * v);
      return moment(M) * boost::math::gamma_p(static_cast<long double>(M + 1) / 2, x);
    }
    case LawKind::PowerTail: {
      long double sigma = pareto_scale();
      long double u = U / sigma;
      if (u <= 1.0L) return 0.0L;
      long double sm = std::pow(sigma, M);
      if (M == alpha) return sm * alpha * std::log(u);
      return sm * alpha / (alpha - M) * (1.0L - std::pow(u, M - static_cast<long double>(alpha)));
    }
    case LawKind::Custom: break;
  }
  throw std::domain_error("truncated moments unsupported for a custom moment list");
}

long double EntryLaw::tail_probability(long double U) const {
  switch (kind) {
    case LawKind::Rademacher: return v > U ? 1.0L : 0.0L;
    case LawKind::Gaussian: return std::erfc(U / (v * std::sqrt(2.0L)));
    case LawKind::PowerTail: {
      long double u = U / pareto_scale();
      return u <= 1.0L ? 1.0L : std::pow(u, -static_cast<long double>(alpha));
    }
    case LawKind::Custom: break;
  }
  throw std::domain_error("tail probability unsupported for a custom moment list");
}

double EntryLaw::sample(double u1, double u2) const {
  switch (kind) {
    case LawKind::Rademacher: return u1 < 0.5 ? -v : v;
    case LawKind::Gaussian: return v * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    case LawKind::PowerTail: {
      double y = std::pow(u1, -1.0 / alpha);
      return (u2 < 0.5 ? -1.0 : 1.0) * pareto_scale() * y;
    }
    case LawKind::Custom: break;
  }
  throw std::domain_error("cannot sample from a custom moment list");
}

long double truncated_moment_quadrature(const EntryLaw& law, int M, long double U) {
  using boost::math::quadrature::gauss_kronrod;
  if (M % 2) return 0.0L;
  switch (law.kind) {
    case LawKind::Gaussian: {
      long double v = law.v;
      auto f = [&](long double x) {
        return std::pow(x, M) * std::exp(-x * x / (2 * v * v)) / (v * std::sqrt(2 * kPi));
      };
      return 2.0L * gauss_kronrod<long double, 61>::integrate(f, 0.0L, U, 15, 1e-14L);
    }
    case LawKind::PowerTail: {
      long double sigma = law.pareto_scale(), a = law.alpha;
      if (U <= sigma) return 0.0L;
      auto f = [&](long double x) { return std::pow(x, M) * a * std::pow(sigma, a) * std::pow(x, -a - 1); };
      return gauss_kronrod<long double, 61>::integrate(f, sigma, U, 15, 1e-14L);
    }
    case LawKind::Rademacher: return law.truncated_moment(M, U);
    case LawKind::Custom: break;
  }
  throw std::domain_error("quadrature unsupported for a custom moment list");
}

}  // namespace momentlab
