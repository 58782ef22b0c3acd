#pragma once

#include "momentlab/bignum.hpp"

#include <ostream>
#include <vector>

namespace momentlab {

// Formal power series truncated at order K (coefficients 0..K), exact rationals.
class Series {
 public:
  explicit Series(int order = 0) : c_(order + 1, Rational(0)) {}
  Series(int order, std::vector<Rational> coeffs);

  static Series constant(int order, const Rational& a);
  static Series monomial(int order, int power, const Rational& a = 1);  // a tau^power

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int k) const { return c_[k]; }
  Rational& operator[](int k) { return c_[k]; }
  const std::vector<Rational>& coefficients() const { return c_; }

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series operator*(const Rational& a) const;
  Series times_tau(int power = 1) const;  // tau^power * f, truncated
  Series derivative() const;              // order drops by one
  Series pow(unsigned e) const;
  Series truncate(int order) const;

  bool operator==(const Series& o) const { return c_ == o.c_; }
  bool is_zero() const;
  // Coefficientwise f <= g over the common order.
  bool coefficientwise_le(const Series& o) const;

 private:
  std::vector<Rational> c_;
};

// phi(tau) = sum t_k tau^k.
Series catalan_gf(int K);
// 1/sqrt(1-4 tau) with coefficients (k+1) t_k = C(2k, k).
Series inv_sqrt_1m4(int K);

// tau phi^2 - (phi - 1), identically zero.
Series catalan_quadratic_residual(int K);
// tau phi' - (1/sqrt(1-4tau) - phi), identically zero (order K-1).
Series catalan_derivative_residual(int K);

// Walks with exactly one 2-fold edge and no other self-intersections.
BigCount n2_count(int s);
// (1-3tau)/sqrt(1-4tau) + (2tau-1) phi. Its tau^{s+1} coefficient is N2_s,
// so it equals tau times the generating function of n2_count.
Series n2_closed_form(int K);
// sum_s N2_s tau^s, read off n2_closed_form one degree up.
Series n2_series(int K);
// tau^2 phi^3 (2 tau phi' + phi), the product form of the same series.
Series n2_series_product(int K);

// Convolution sum over u + v_1 + ... + v_{2m-1} = s - m of (2u+1) t_u t_{v_1} ... t_{v_{2m-1}}.
BigCount nm_count(int m, int s);
// 2^m s t_s.
BigCount nm_bound(int m, int s);

// G^{(l)} = (2 tau phi)^l / sqrt(1-4tau).
Series g_series(int l, int K);

// Count over all plane trees with s edges of sum_v C(deg_v, m): choices of m
// edges sharing a parent. Brute force over Dyck paths.
BigCount same_cluster_count_bruteforce(int m, int s);

// CSV: k, t_k, central binomial, N2_k, N3_k, ...
void write_genfun_csv(std::ostream& out, int K, int max_m);

}  // namespace momentlab
