#include "momentlab/genfun.hpp"

#include "momentlab/dyck.hpp"

#include <algorithm>
#include <stdexcept>

namespace momentlab {

Series::Series(int order, std::vector<Rational> coeffs) : c_(order + 1, Rational(0)) {
  for (size_t k = 0; k < coeffs.size() && k < c_.size(); ++k) c_[k] = coeffs[k];
}

Series Series::constant(int order, const Rational& a) {
  Series s(order);
  s[0] = a;
  return s;
}

Series Series::monomial(int order, int power, const Rational& a) {
  Series s(order);
  if (power <= order) s[power] = a;
  return s;
}

Series Series::operator+(const Series& o) const {
  Series r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r[k] = c_[k] + o[k];
  return r;
}

Series Series::operator-(const Series& o) const {
  Series r(std::min(order(), o.order()));
  for (int k = 0; k <= r.order(); ++k) r[k] = c_[k] - o[k];
  return r;
}

Series Series::operator*(const Series& o) const {
  Series r(std::min(order(), o.order()));
  int K = r.order();
  for (int i = 0; i <= K; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; i + j <= K; ++j) r[i + j] += c_[i] * o[j];
  }
  return r;
}

Series Series::operator*(const Rational& a) const {
  Series r(*this);
  for (auto& x : r.c_) x *= a;
  return r;
}

Series Series::times_tau(int power) const {
  Series r(order());
  for (int k = 0; k + power <= order(); ++k) r[k + power] = c_[k];
  return r;
}

Series Series::derivative() const {
  Series r(std::max(order() - 1, 0));
  for (int k = 1; k <= order(); ++k) r[k - 1] = c_[k] * k;
  return r;
}

Series Series::pow(unsigned e) const {
  Series r = constant(order(), 1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

Series Series::truncate(int order) const { return Series(order, c_); }

bool Series::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
}

bool Series::coefficientwise_le(const Series& o) const {
  int K = std::min(order(), o.order());
  for (int k = 0; k <= K; ++k)
    if (c_[k] > o[k]) return false;
  return true;
}

Series catalan_gf(int K) {
  Series s(K);
  for (int k = 0; k <= K; ++k) s[k] = Rational(catalan(k));
  return s;
}

Series inv_sqrt_1m4(int K) {
  Series s(K);
  for (int k = 0; k <= K; ++k) s[k] = Rational(binomial(2 * k, k));
  return s;
}

Series catalan_quadratic_residual(int K) {
  Series phi = catalan_gf(K);
  return (phi * phi).times_tau() - (phi - Series::constant(K, 1));
}

Series catalan_derivative_residual(int K) {
  Series phi = catalan_gf(K);
  Series lhs = phi.derivative().times_tau();
  Series rhs = inv_sqrt_1m4(K).truncate(K - 1) - phi.truncate(K - 1);
  return lhs - rhs;
}

BigCount n2_count(int s) {
  if (s < 0) throw std::domain_error("negative s");
  Rational v = Rational(catalan(s)) * (Rational(s) - ratio(3 * s, s + 2));
  if (v.get_den() != 1) throw std::logic_error("N2 count is not integral at s=" + std::to_string(s));
  return v.get_num();
}

Series n2_closed_form(int K) {
  Series one = Series::constant(K, 1);
  Series a = (one - Series::monomial(K, 1, 3)) * inv_sqrt_1m4(K);
  Series b = (Series::monomial(K, 1, 2) - one) * catalan_gf(K);
  return a + b;
}

Series n2_series(int K) {
  Series f = n2_closed_form(K + 1);
  Series out(K);
  for (int k = 0; k <= K; ++k) out[k] = f[k + 1];
  return out;
}

Series n2_series_product(int K) {
  Series phi = catalan_gf(K);
  // tau phi' keeps the full order, unlike phi' alone.
  Series tau_dphi(K);
  for (int k = 1; k <= K; ++k) tau_dphi[k] = phi[k] * k;
  Series inner = tau_dphi * Rational(2) + phi;
  return (phi.pow(3) * inner).times_tau(2);
}

BigCount nm_count(int m, int s) {
  if (m < 2) throw std::domain_error("nm_count needs m >= 2");
  if (s < m) return 0;
  int K = s - m;
  std::vector<BigCount> t(K + 1), a(K + 1);
  for (int k = 0; k <= K; ++k) {
    t[k] = catalan(k);
    a[k] = t[k] * (2 * k + 1);
  }
  std::vector<BigCount> acc = a;
  for (int i = 0; i < 2 * m - 1; ++i) {
    std::vector<BigCount> next(K + 1, 0);
    for (int x = 0; x <= K; ++x)
      for (int y = 0; x + y <= K; ++y) next[x + y] += acc[x] * t[y];
    acc = std::move(next);
  }
  return acc[K];
}

BigCount nm_bound(int m, int s) {
  BigCount two_m;
  mpz_ui_pow_ui(two_m.get_mpz_t(), 2, m);
  return two_m * s * catalan(s);
}

Series g_series(int l, int K) {
  Series two_tau_phi = catalan_gf(K).times_tau() * Rational(2);
  return two_tau_phi.pow(l) * inv_sqrt_1m4(K);
}

BigCount same_cluster_count_bruteforce(int m, int s) {
  BigCount total = 0;
  for_each_dyck(s, [&](const DyckPath& path) {
    PlaneTree tree = dyck_to_tree(path);
    for (const auto& kids : tree.children) total += binomial(kids.size(), m);
  });
  return total;
}

void write_genfun_csv(std::ostream& out, int K, int max_m) {
  out << "k,catalan,central_binomial,n2";
  for (int m = 3; m <= max_m; ++m) out << ",n" << m;
  out << '\n';
  for (int k = 0; k <= K; ++k) {
    out << k << ',' << catalan(k) << ',' << binomial(2 * k, k) << ',' << n2_count(k);
    for (int m = 3; m <= max_m; ++m) out << ',' << nm_count(m, k);
    out << '\n';
  }
}

}  // namespace momentlab
