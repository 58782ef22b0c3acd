#pragma once

#include <gmpxx.h>

#include <string>

namespace momentlab {

using BigCount = mpz_class;
using Rational = mpq_class;

BigCount factorial(unsigned long k);
BigCount binomial(unsigned long n, unsigned long k);
// num/den in lowest terms; mpq_class(num, den) alone does not reduce.
Rational ratio(const BigCount& num, const BigCount& den);
BigCount falling_factorial(unsigned long n, unsigned long k);

// x^e with 0^0 = 1.
Rational rpow(const Rational& x, unsigned long e);

long double to_long_double(const BigCount& x);
long double to_long_double(const Rational& x);

// Exact conversion of a finite double.
Rational from_double(double x);

std::string to_string(const BigCount& x);
std::string to_string(const Rational& x);

}  // namespace momentlab
