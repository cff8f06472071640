#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bmt {

using Integer = mpz_class;
using Rational = mpq_class;

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "p", "p/q", or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);

/// num/den in lowest terms. Throws InvalidInput when den is zero.
Rational ratio(const Integer& num, const Integer& den);

double to_double(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);
Integer pow(const Integer& base, unsigned exponent);

Integer factorial(unsigned n);
/// n (n-1) ... (n-k+1); zero when k > n.
Integer falling_factorial(long n, long k);
Integer binomial(long n, long k);
/// 1 * 3 * ... * (2k-1), the number of pairings of 2k points.
Integer odd_double_factorial(unsigned k);

/// |q| <= bound, exactly.
inline bool abs_leq(const Rational& q, const Rational& bound) {
  return abs(q) <= bound;
}

}  // namespace bmt
