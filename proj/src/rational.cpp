#include "commonsys/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "commonsys/error.hpp"

namespace commonsys {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(Errc::MalformedDocument, "not a rational number: '" + std::string(text) + "'");
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad(whole);
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) bad(whole);
  mpz_class v(std::string(s), 10);
  return negative ? mpz_class(-v) : v;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    mpz_class den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) bad(text);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) bad(text);
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') bad(text);
    std::string_view exp_part = s.substr(i + 1);
    if (!exp_part.empty() && exp_part.front() == '+') exp_part.remove_prefix(1);
    long e = 0;
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), e);
    if (ec != std::errc() || ptr != exp_part.data() + exp_part.size()) bad(text);
    exponent += e;
  }
  mpz_class mant(digits, 10);
  if (negative) mant = -mant;
  Rational q;
  if (exponent >= 0) {
    q = Rational(mant * pow10(static_cast<unsigned long>(exponent)));
  } else {
    q = Rational(mant, pow10(static_cast<unsigned long>(-exponent)));
    q.canonicalize();
  }
  return q;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(Errc::InvalidArgument, "to_chars failed");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

Rational pow(const Rational& base, std::uint64_t exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational floor_to(const Rational& q, const mpz_class& den) {
  mpz_class k;
  mpz_class scaled = q.get_num() * den;
  mpz_fdiv_q(k.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(k, den);
  r.canonicalize();
  return r;
}

Rational ceil_to(const Rational& q, const mpz_class& den) {
  mpz_class k;
  mpz_class scaled = q.get_num() * den;
  mpz_cdiv_q(k.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(k, den);
  r.canonicalize();
  return r;
}

namespace {

// floor(sqrt(q) * den) and whether it is exact.
std::pair<mpz_class, bool> scaled_isqrt(const Rational& q, const mpz_class& den) {
  if (sgn(q) < 0) throw Error(Errc::InvalidArgument, "sqrt of negative rational");
  mpz_class a = q.get_num() * den * den;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_mpz_t(), q.get_den_mpz_t());
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
  bool exact = s * s * q.get_den() == a;
  return {s, exact};
}

}  // namespace

Rational sqrt_lower(const Rational& q, const mpz_class& den) {
  auto [s, exact] = scaled_isqrt(q, den);
  (void)exact;
  Rational r(s, den);
  r.canonicalize();
  return r;
}

Rational sqrt_upper(const Rational& q, const mpz_class& den) {
  auto [s, exact] = scaled_isqrt(q, den);
  Rational r(exact ? s : mpz_class(s + 1), den);
  r.canonicalize();
  return r;
}

namespace {

// ln(r) for r in [1, 2]: 2*artanh(w), w = (r-1)/(r+1) in [0, 1/3].
Enclosure ln_reduced(const Rational& r, unsigned terms) {
  Rational w = (r - 1) / (r + 1);
  Rational w2 = w * w;
  Rational power = w;
  Rational sum = 0;
  for (unsigned j = 0; j < terms; ++j) {
    sum += power / (2 * j + 1);
    power *= w2;
  }
  // power == w^(2*terms + 1); tail of sum_{j>=terms} w^(2j+1)/(2j+1)
  Rational tail = power / ((2 * terms + 1) * (1 - w2));
  return {2 * sum, 2 * (sum + tail)};
}

}  // namespace

Enclosure ln_enclosure(const Rational& q, unsigned terms) {
  if (sgn(q) <= 0) throw Error(Errc::InvalidArgument, "ln of non-positive rational");
  long k = 0;
  Rational r = q;
  while (r >= 2) {
    r /= 2;
    ++k;
  }
  while (r < 1) {
    r *= 2;
    --k;
  }
  Enclosure ln2 = ln_reduced(Rational(2), terms);
  Enclosure lr = ln_reduced(r, terms);
  if (k >= 0) return {k * ln2.lo + lr.lo, k * ln2.hi + lr.hi};
  return {k * ln2.hi + lr.lo, k * ln2.lo + lr.hi};
}

Rational exp_neg_lower(const Rational& x, unsigned pairs) {
  if (sgn(x) < 0 || x > 1) throw Error(Errc::InvalidArgument, "exp_neg_lower needs 0 <= x <= 1");
  Rational sum = 1;
  Rational term = 1;
  for (unsigned i = 1; i <= 2 * pairs + 1; ++i) {
    term = term * x / i;
    if (i % 2 == 1) sum -= term; else sum += term;
  }
  return sum;
}

}  // namespace commonsys
