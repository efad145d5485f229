#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commonsys/rational.hpp"

namespace commonsys {

/// a + b*sqrt(2) with exact rational a, b.
struct AlgebraicNumber {
  Rational a;
  Rational b;

  AlgebraicNumber() = default;
  AlgebraicNumber(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {
    a.canonicalize();
    b.canonicalize();
  }
  AlgebraicNumber(long v) : a(v), b(0) {}

  static AlgebraicNumber sqrt2() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  bool is_rational() const { return sgn(b) == 0; }
  AlgebraicNumber conjugate() const { return {a, -b}; }
  /// a^2 - 2 b^2
  Rational norm() const { return Rational(a * a - 2 * b * b); }

  AlgebraicNumber& operator+=(const AlgebraicNumber& o);
  AlgebraicNumber& operator-=(const AlgebraicNumber& o);
  AlgebraicNumber& operator*=(const AlgebraicNumber& o);
  /// Throws InvalidArgument on division by zero.
  AlgebraicNumber& operator/=(const AlgebraicNumber& o);

  friend AlgebraicNumber operator+(AlgebraicNumber x, const AlgebraicNumber& y) { return x += y; }
  friend AlgebraicNumber operator-(AlgebraicNumber x, const AlgebraicNumber& y) { return x -= y; }
  friend AlgebraicNumber operator*(AlgebraicNumber x, const AlgebraicNumber& y) { return x *= y; }
  friend AlgebraicNumber operator/(AlgebraicNumber x, const AlgebraicNumber& y) { return x /= y; }
  friend AlgebraicNumber operator-(const AlgebraicNumber& x) { return {-x.a, -x.b}; }
  friend bool operator==(const AlgebraicNumber& x, const AlgebraicNumber& y) {
    return x.a == y.a && x.b == y.b;
  }
};

/// Exact sign of a + b sqrt2: compares a^2 with 2 b^2 when the signs differ.
int an_sign(const AlgebraicNumber& x);
int compare(const AlgebraicNumber& x, const AlgebraicNumber& y);

/// Rational bounds lo <= x <= hi, width about 2|b|/den.
Rational lower_bound(const AlgebraicNumber& x, const mpz_class& den);
Rational upper_bound(const AlgebraicNumber& x, const mpz_class& den);

double to_double(const AlgebraicNumber& x);
/// "a", "c*sqrt2", or "a + c*sqrt2" with a, c in lowest terms.
std::string to_string(const AlgebraicNumber& x);
/// Accepts "a/b + c/d*sqrt2", "-c/d*sqrt2", "sqrt2", "3", with optional spaces.
AlgebraicNumber parse_algebraic(std::string_view text);

inline constexpr std::size_t kMaxPolyDegree = 64;

/// Univariate polynomial over Q(sqrt2); coeffs[k] multiplies x^k.
/// Trailing zero coefficients are stripped, so the zero polynomial has no
/// coefficients and degree -1.
class ExactPoly {
 public:
  ExactPoly() = default;
  explicit ExactPoly(std::vector<AlgebraicNumber> coeffs);
  static ExactPoly constant(const AlgebraicNumber& c);
  static ExactPoly x();
  /// (x - r)
  static ExactPoly linear_root(const Rational& r);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<AlgebraicNumber>& coeffs() const { return coeffs_; }
  AlgebraicNumber coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : AlgebraicNumber(); }
  const AlgebraicNumber& leading() const { return coeffs_.back(); }

  ExactPoly derivative() const;
  ExactPoly scaled(const AlgebraicNumber& c) const;
  ExactPoly pow(unsigned e) const;
  /// p(a x + b) for rational a, b.
  ExactPoly substitute_affine(const Rational& a, const Rational& b) const;

  ExactPoly& operator+=(const ExactPoly& o);
  ExactPoly& operator-=(const ExactPoly& o);
  friend ExactPoly operator+(ExactPoly x, const ExactPoly& y) { return x += y; }
  friend ExactPoly operator-(ExactPoly x, const ExactPoly& y) { return x -= y; }
  friend ExactPoly operator-(const ExactPoly& x) { return x.scaled(AlgebraicNumber(-1)); }
  friend ExactPoly operator*(const ExactPoly& x, const ExactPoly& y);
  friend bool operator==(const ExactPoly& x, const ExactPoly& y) { return x.coeffs_ == y.coeffs_; }

 private:
  void normalize();
  std::vector<AlgebraicNumber> coeffs_;
};

/// Quotient and remainder by field division. Throws ZeroPolynomial.
std::pair<ExactPoly, ExactPoly> divide(const ExactPoly& num, const ExactPoly& den);

/// Coefficient list, constant term first, each entry "a/b + c/d*sqrt2".
ExactPoly parse_poly(const std::vector<std::string>& coeffs);
std::vector<std::string> poly_to_strings(const ExactPoly& p);

/// Horner evaluation, exact.
AlgebraicNumber eval_exact(const ExactPoly& p, const Rational& x);
AlgebraicNumber eval_exact(const ExactPoly& p, const AlgebraicNumber& x);

/// P, P', then P_{k+1} = -rem(P_{k-1}, P_k) / |lc|, until the remainder
/// vanishes. Throws ZeroPolynomial.
std::vector<ExactPoly> sturm_sequence(const ExactPoly& p);
/// Sign changes of the sequence at x, zeros skipped.
int sign_variations(const std::vector<ExactPoly>& seq, const Rational& x);

/// Distinct real roots in the open interval (lo, hi). lo and hi must not be
/// roots of p.
int count_roots_open(const ExactPoly& p, const Rational& lo, const Rational& hi);

enum class SignStatus { StrictlyPositive, StrictlyNegative, HasRoot, Indeterminate };
std::string to_string(SignStatus s);

struct SturmData {
  ExactPoly poly;
  Rational lo;
  Rational hi;
  std::vector<ExactPoly> sequence;
  int variations_lo = 0;
  int variations_hi = 0;
  AlgebraicNumber value_lo;
  AlgebraicNumber value_hi;
};

struct SignResult {
  SignStatus status = SignStatus::Indeterminate;
  /// Distinct roots in (lo, hi); endpoint roots are reported via the values.
  int interior_roots = 0;
  SturmData data;
};

/// Sign of p on the closed interval [lo, hi]. Endpoints are evaluated exactly
/// and a zero there counts as a root. Throws ZeroPolynomial, InvalidArgument
/// (lo >= hi).
SignResult sturm_sign_on_interval(const ExactPoly& p, const Rational& lo, const Rational& hi);

struct RootBracket {
  Rational lo;
  Rational hi;
  SturmData data;  // Sturm count on the search interval
};

/// Bisects down to width <= precision, keeping a strict sign change across
/// the bracket (or landing exactly on the root, returned as lo == hi).
/// Throws NotExactlyOneRoot.
RootBracket isolate_positive_root(const ExactPoly& p, const Rational& lo, const Rational& hi,
                                  const Rational& precision);

/// Polynomial in two variables (alpha, x) over Q(sqrt2).
class BivariatePoly {
 public:
  struct Term {
    unsigned i = 0;  // power of alpha
    unsigned j = 0;  // power of x
    AlgebraicNumber c;
  };

  BivariatePoly() = default;
  explicit BivariatePoly(std::vector<Term> terms);
  const std::vector<Term>& terms() const { return terms_; }
  AlgebraicNumber eval(const Rational& alpha, const Rational& x) const;
  /// Lower bound over the box from per-monomial interval bounds.
  AlgebraicNumber interval_lower(const Rational& alo, const Rational& ahi, const Rational& xlo,
                                 const Rational& xhi) const;
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

struct Box {
  Rational alo, ahi, xlo, xhi;
};

/// Quadtree subdivision record in preorder: a split node is followed by its
/// four children (alpha-low/x-low, alpha-high/x-low, alpha-low/x-high,
/// alpha-high/x-high); a leaf stores the certified lower bound on its cell.
struct SubdivisionNode {
  bool leaf = true;
  AlgebraicNumber lower;
};

struct SubdivisionResult {
  bool positive = false;  // F >= 0 certified on the box
  BivariatePoly poly;
  Box box;
  std::vector<SubdivisionNode> tree;
  std::size_t leaves = 0;
  unsigned depth_reached = 0;
  /// When positive is false: a point with F < 0, exactly evaluated.
  std::optional<std::pair<Rational, Rational>> witness;
  std::optional<AlgebraicNumber> witness_value;
};

/// Certifies F >= 0 on the box or finds an exact negative point. Throws
/// DepthExhausted when neither happens within max_depth (<= 40).
SubdivisionResult subdivision_positive_on_box(const BivariatePoly& f, const Box& box, unsigned max_depth);

/// Interval power [lo, hi]^k for rational endpoints.
std::pair<Rational, Rational> interval_pow(const Rational& lo, const Rational& hi, unsigned k);

}  // namespace commonsys
