#include "bmt/rational.hpp"

#include "bmt/errors.hpp"

#include <cctype>

namespace bmt {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidInput("not an integer: '" + std::string(s) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InvalidInput("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!all_digits(frac)) throw InvalidInput("bad decimal '" + std::string(text) + "'");
    std::string_view digits = whole;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    Integer w = digits.empty() ? Integer(0) : parse_integer(digits);
    Integer f = parse_integer(frac);
    Rational q(f, pow(Integer(10), static_cast<unsigned>(frac.size())));
    q.canonicalize();
    q += w;
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text));
}

Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(pow(base.get_num(), exponent), pow(base.get_den(), exponent));
  result.canonicalize();
  return result;
}

Integer pow(const Integer& base, unsigned exponent) {
  Integer result;
  mpz_pow_ui(result.get_mpz_t(), base.get_mpz_t(), exponent);
  return result;
}

Integer factorial(unsigned n) {
  Integer result;
  mpz_fac_ui(result.get_mpz_t(), n);
  return result;
}

Integer falling_factorial(long n, long k) {
  if (k < 0) throw InvalidInput("falling factorial with negative length");
  if (k > n) return 0;
  Integer result = 1;
  for (long j = 0; j < k; ++j) result *= (n - j);
  return result;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return result;
}

Integer odd_double_factorial(unsigned k) {
  Integer result = 1;
  for (unsigned j = 1; j <= k; ++j) result *= (2 * j - 1);
  return result;
}

}  // namespace bmt
