#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace commonsys {

using Rational = mpq_class;

/// Parses "3", "-7/4", "0.125", "1e-3", "-2.5E+2" into an exact rational.
/// Decimal literals are read digit for digit, not through a double.
Rational parse_rational(std::string_view text);

/// Exact rational whose decimal expansion is the shortest round-trip
/// representation of `x` (so 0.1 maps to 1/10, not to the binary double).
Rational rational_from_double(double x);

/// "p/q" or "p" in lowest terms.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

Rational pow(const Rational& base, std::uint64_t exponent);

/// Largest k/den <= q, and smallest k/den >= q.
Rational floor_to(const Rational& q, const mpz_class& den);
Rational ceil_to(const Rational& q, const mpz_class& den);

/// Rational r with r <= sqrt(q) (resp. >= sqrt(q)) and |r - sqrt(q)| <= 1/den.
/// Requires q >= 0.
Rational sqrt_lower(const Rational& q, const mpz_class& den);
Rational sqrt_upper(const Rational& q, const mpz_class& den);

/// Certified rational enclosure lo <= ln(q) <= hi for q > 0, via argument
/// reduction by powers of two and the artanh series with an explicit tail
/// bound. `terms` controls the width (about 9^-terms).
struct Enclosure {
  Rational lo;
  Rational hi;
};
Enclosure ln_enclosure(const Rational& q, unsigned terms = 40);

/// Lower bound on exp(-x) for 0 <= x <= 1: the alternating Taylor series cut
/// after a negative term, 1 - x + x^2/2 - ... - x^(2m+1)/(2m+1)!.
Rational exp_neg_lower(const Rational& x, unsigned pairs = 3);

}  // namespace commonsys
