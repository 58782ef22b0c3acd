#include "momentlab/bignum.hpp"

#include <cmath>
#include <stdexcept>

namespace momentlab {

Rational ratio(const BigCount& num, const BigCount& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigCount factorial(unsigned long k) {
  BigCount r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

BigCount binomial(unsigned long n, unsigned long k) {
  BigCount r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigCount falling_factorial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  BigCount r = 1;
  for (unsigned long i = 0; i < k; ++i) r *= n - i;
  return r;
}

Rational rpow(const Rational& x, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

namespace {

// Keeps the 64 leading bits, so huge counts survive the trip to long double.
long double mpz_to_ld(const mpz_t x) {
  if (mpz_sgn(x) == 0) return 0.0L;
  mpz_class a;
  mpz_abs(a.get_mpz_t(), x);
  size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  size_t shift = bits > 64 ? bits - 64 : 0;
  if (shift) mpz_fdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), shift);
  unsigned long long v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, a.get_mpz_t());
  long double r = std::ldexp(static_cast<long double>(v), static_cast<int>(shift));
  return mpz_sgn(x) < 0 ? -r : r;
}

}  // namespace

long double to_long_double(const BigCount& x) { return mpz_to_ld(x.get_mpz_t()); }

long double to_long_double(const Rational& x) {
  if (x == 0) return 0.0L;
  // Scale so both parts fit; ratio of 64-bit-truncated parts is accurate to ~1e-18.
  size_t nb = mpz_sizeinbase(x.get_num_mpz_t(), 2);
  size_t db = mpz_sizeinbase(x.get_den_mpz_t(), 2);
  mpz_class num(x.get_num()), den(x.get_den());
  long e = 0;
  if (nb > 64) {
    mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), nb - 64);
    e += static_cast<long>(nb - 64);
  }
  if (db > 64) {
    mpz_fdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), db - 64);
    e -= static_cast<long>(db - 64);
  }
  long double r = mpz_to_ld(num.get_mpz_t()) / mpz_to_ld(den.get_mpz_t());
  return std::ldexp(r, static_cast<int>(e));
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value has no rational form");
  return Rational(x);
}

std::string to_string(const BigCount& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace momentlab
