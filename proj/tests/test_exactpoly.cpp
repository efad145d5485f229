#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "commonsys/certificate.hpp"
#include "commonsys/error.hpp"
#include "commonsys/exactpoly.hpp"
#include "oracles.hpp"

using namespace commonsys;

namespace {

AlgebraicNumber an(long a, long b = 0) { return {Rational(a), Rational(b)}; }

AlgebraicNumber random_an(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

// Sign changes of p sampled on a rational grid with step 1/steps, counting
// exact zeros at grid points as roots.
int scan_roots(const ExactPoly& p, const Rational& lo, const Rational& hi, long steps) {
  int roots = 0, last = 0;
  Rational width = hi - lo;
  for (long k = 0; k <= steps; ++k) {
    Rational x = lo + width * k / steps;
    int s = an_sign(eval_exact(p, x));
    if (s == 0) {
      ++roots;
      last = 0;
      continue;
    }
    if (last != 0 && s != last) ++roots;
    last = s;
  }
  return roots;
}

ExactPoly from_rational_roots(const std::vector<Rational>& roots, const Rational& lead) {
  ExactPoly p = ExactPoly::constant(AlgebraicNumber(lead));
  for (const auto& r : roots) p = p * ExactPoly::linear_root(r);
  return p;
}

}  // namespace

TEST_CASE("signs") {
  CHECK(an_sign(an(3, -2)) == 1);
  CHECK(an_sign(an(-1)) == -1);
  CHECK(an_sign(an(0)) == 0);
  CHECK(an_sign(an(-3, 2)) == -1);
  CHECK(an_sign(an(1, 1)) == 1);
  CHECK(an_sign(AlgebraicNumber(Rational(-17, 12), Rational(1))) == -1);  // sqrt2 < 17/12
  CHECK(compare(an(1, 1), an(2, 1)) < 0);
}

TEST_CASE("field axioms hold exactly") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 300; ++rep) {
    auto a = random_an(rng), b = random_an(rng), c = random_an(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    if (!a.is_zero()) CHECK(a * (an(1) / a) == an(1));
    CHECK(a - a == an(0));
  }
  CHECK_THROWS_AS(an(1) / an(0), Error);
}

TEST_CASE("sign agrees with floating evaluation") {
  std::mt19937_64 rng(2);
  int checked = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    auto x = random_an(rng);
    long double v = to_double(x.a) + static_cast<long double>(to_double(x.b)) * std::sqrt(2.0L);
    if (std::abs(v) < 1e-12) continue;
    CHECK(an_sign(x) == (v > 0 ? 1 : -1));
    ++checked;
  }
  CHECK(checked > 9000);
}

TEST_CASE("rational bounds bracket the value") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    auto x = random_an(rng);
    auto lo = lower_bound(x, mpz_class(1000000)), hi = upper_bound(x, mpz_class(1000000));
    CHECK(an_sign(x - AlgebraicNumber(lo)) >= 0);
    CHECK(an_sign(AlgebraicNumber(hi) - x) >= 0);
    CHECK(to_double(Rational(hi - lo)) < 1e-4);
  }
}

TEST_CASE("text forms round trip") {
  CHECK(parse_algebraic("1/2 + 3/4*sqrt2") == AlgebraicNumber(Rational(1, 2), Rational(3, 4)));
  CHECK(parse_algebraic("-sqrt2") == an(0, -1));
  CHECK(parse_algebraic(" 3 ") == an(3));
  CHECK(parse_algebraic("-1/3*sqrt2") == AlgebraicNumber(Rational(0), Rational(-1, 3)));
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    auto x = random_an(rng);
    CHECK(parse_algebraic(to_string(x)) == x);
  }
  CHECK_THROWS_AS(parse_algebraic("1 + x"), Error);
  auto p = parse_poly({"1", "0", "-1/2*sqrt2"});
  CHECK(p.degree() == 2);
  CHECK(parse_poly(poly_to_strings(p)) == p);
}

TEST_CASE("evaluation") {
  auto p = parse_poly({"3 + sqrt2", "5", "7"});
  CHECK(eval_exact(p, Rational(0)) == AlgebraicNumber(Rational(3), Rational(1)));
  auto sq = ExactPoly::linear_root(Rational(1)).pow(2);
  CHECK(eval_exact(sq, Rational(1)).is_zero());
  CHECK(eval_exact(ExactPoly({an(-2), an(0), an(1)}), AlgebraicNumber::sqrt2()).is_zero());
}

TEST_CASE("division") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<AlgebraicNumber> a(6), b(3);
    for (auto& c : a) c = random_an(rng);
    for (auto& c : b) c = random_an(rng);
    ExactPoly num(a), den(b);
    if (den.is_zero()) continue;
    auto [q, r] = divide(num, den);
    CHECK(q * den + r == num);
    CHECK(r.degree() < den.degree());
  }
  CHECK_THROWS_AS(divide(ExactPoly::x(), ExactPoly()), Error);
}

TEST_CASE("Sturm counts agree with a fine sign scan") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<long> num(-99, 99);
  for (int rep = 0; rep < 40; ++rep) {
    std::size_t deg = rep % 2 ? 5 : 3;
    std::vector<Rational> roots;
    // Well separated rational roots, plus an irreducible quadratic factor
    // on odd reps so that not every root is rational.
    for (std::size_t k = 0; k < deg - (rep % 2 ? 2 : 0); ++k) roots.push_back(oracle::frac(num(rng), 100));
    auto p = from_rational_roots(roots, Rational(rep % 3 == 0 ? -2 : 3));
    if (rep % 2) p = p * ExactPoly({an(1), an(0), an(1)});
    Rational lo(-1), hi(1);
    auto seq = sturm_sequence(p);
    int sturm = sign_variations(seq, lo) - sign_variations(seq, hi);
    // Distinct roots only; repeated roots collapse.
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    int distinct_inside = 0;
    for (const auto& r : roots) distinct_inside += (r > lo && r <= hi);
    CHECK(sturm == distinct_inside);
    // Scan is only reliable when roots sit at least one grid step apart.
    bool separated = true;
    for (std::size_t k = 1; k < roots.size(); ++k) separated &= roots[k] - roots[k - 1] > Rational(1, 5000);
    if (separated) CHECK(scan_roots(p, lo, hi, 10000) == distinct_inside + (eval_exact(p, lo).is_zero() ? 1 : 0));
  }
}

TEST_CASE("Sturm counts on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-20, 20);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<AlgebraicNumber> c(rep % 2 ? 6 : 4);
    for (auto& x : c) x = AlgebraicNumber(Rational(num(rng), 4));
    if (c.back().is_zero()) c.back() = an(1);
    ExactPoly p(c);
    Rational lo(-3), hi(3);
    if (eval_exact(p, lo).is_zero() || eval_exact(p, hi).is_zero()) continue;
    CHECK(count_roots_open(p, lo, hi) == scan_roots(p, lo, hi, 60000));
  }
}

TEST_CASE("sign on interval") {
  auto s = parse_poly({"1/1024", "1/256", "-1/8", "-1"});
  auto r = sturm_sign_on_interval(s, Rational(0), Rational(7, 100));
  CHECK(r.status == SignStatus::StrictlyPositive);

  // x^5 - (1-x) x^4 / sqrt2 - (1-x)^5 / (2 sqrt2)
  auto one_minus_x = ExactPoly({an(1), an(-1)});
  auto xx = ExactPoly::x();
  auto q = xx.pow(5) - (one_minus_x * xx.pow(4)).scaled(AlgebraicNumber(Rational(0), Rational(1, 2))) -
           one_minus_x.pow(5).scaled(AlgebraicNumber(Rational(0), Rational(1, 4)));
  auto rq = sturm_sign_on_interval(q, Rational(0), Rational(1, 2));
  CHECK(rq.status == SignStatus::StrictlyNegative);
  CHECK(rq.data.value_lo == AlgebraicNumber(Rational(0), Rational(-1, 4)));  // -1/(2 sqrt2)
  // (1/32)(1 - 3/(2 sqrt2)) = 1/32 - 3 sqrt2 / 128
  CHECK(rq.data.value_hi == AlgebraicNumber(Rational(1, 32), Rational(-3, 128)));

  auto two = ExactPoly({an(-2), an(0), an(1)});
  CHECK(sturm_sign_on_interval(two, Rational(1), Rational(2)).status == SignStatus::HasRoot);
  CHECK(sturm_sign_on_interval(two, Rational(0), Rational(1)).status == SignStatus::StrictlyNegative);
  // Endpoint root.
  CHECK(sturm_sign_on_interval(ExactPoly::x(), Rational(0), Rational(1)).status == SignStatus::HasRoot);
  CHECK_THROWS_AS(sturm_sign_on_interval(ExactPoly(), Rational(0), Rational(1)), Error);
  CHECK_THROWS_AS(sturm_sign_on_interval(two, Rational(1), Rational(1)), Error);
}

TEST_CASE("root isolation") {
  auto two = ExactPoly({an(-2), an(0), an(1)});
  auto b = isolate_positive_root(two, Rational(1), Rational(2), Rational(1, 1000));
  CHECK(b.hi - b.lo <= Rational(1, 1000));
  CHECK(to_double(b.lo) <= std::sqrt(2.0));
  CHECK(to_double(b.hi) >= std::sqrt(2.0));

  // (1/3)^5 - (1/3)^4 x - x^3
  auto r = parse_poly({"1/243", "-1/81", "0", "-1"});
  auto br = isolate_positive_root(r, Rational(0), Rational(1), Rational(1, 1000000));
  CHECK(br.hi - br.lo <= Rational(1, 1000000));
  CHECK(an_sign(eval_exact(r, br.lo)) > 0);
  CHECK(an_sign(eval_exact(r, br.hi)) < 0);
  // Independent bisection on doubles.
  double lo = 0, hi = 1;
  for (int k = 0; k < 60; ++k) {
    double mid = (lo + hi) / 2;
    (std::pow(1.0 / 3, 5) - std::pow(1.0 / 3, 4) * mid - mid * mid * mid > 0 ? lo : hi) = mid;
  }
  CHECK(to_double(br.lo) <= lo + 1e-12);
  CHECK(to_double(br.hi) >= lo - 1e-12);

  auto around = isolate_positive_root(ExactPoly::x(), Rational(-1), Rational(1), Rational(1, 100));
  CHECK(around.lo <= 0);
  CHECK(around.hi >= 0);

  CHECK_THROWS_AS(isolate_positive_root(two, Rational(-2), Rational(2), Rational(1, 10)), Error);
  CHECK_THROWS_AS(isolate_positive_root(two, Rational(2), Rational(3), Rational(1, 10)), Error);
}

TEST_CASE("box subdivision") {
  // alpha^5 - alpha^4 x - x^3
  BivariatePoly f({{5, 0, an(1)}, {4, 1, an(-1)}, {0, 3, an(-1)}});
  auto ok = subdivision_positive_on_box(f, {Rational(1, 3), Rational(2, 3), Rational(0), Rational(1, 10)}, 30);
  CHECK(ok.positive);
  CHECK(ok.leaves >= 1);

  auto bad = subdivision_positive_on_box(f, {Rational(1, 3), Rational(2, 3), Rational(0), Rational(1, 2)}, 30);
  CHECK_FALSE(bad.positive);
  REQUIRE(bad.witness.has_value());
  CHECK(an_sign(f.eval(bad.witness->first, bad.witness->second)) < 0);
  CHECK(an_sign(f.eval(Rational(1, 3), Rational(1, 2))) < 0);

  BivariatePoly one({{0, 0, an(1)}});
  auto trivial = subdivision_positive_on_box(one, {Rational(0), Rational(1), Rational(0), Rational(1)}, 0);
  CHECK(trivial.positive);
  CHECK(trivial.depth_reached == 0);
  CHECK(trivial.tree.size() == 1);

  // (x - 1/2)^2 + 10^-6 is positive, but per-monomial bounds cannot see it
  // at depth 1 and no probe point is negative.
  BivariatePoly tight({{0, 2, an(1)}, {0, 1, an(-1)}, {0, 0, AlgebraicNumber(Rational(250001, 1000000))}});
  CHECK_THROWS_AS(subdivision_positive_on_box(tight, {Rational(0), Rational(1), Rational(0), Rational(1)}, 1), Error);
  CHECK_THROWS_AS(subdivision_positive_on_box(one, {Rational(0), Rational(1), Rational(0), Rational(1)}, 41), Error);
}

TEST_CASE("certificates re-verify and tampering is caught") {
  auto s = parse_poly({"1/1024", "1/256", "-1/8", "-1"});
  auto c = sign_certificate("s", "positive", s, Rational(0), Rational(7, 100), 1);
  CHECK(c.verified);
  CHECK(verify_certificate(c));

  auto tampered = c;
  std::get<SturmWitness>(tampered.witness).variations_hi += 1;
  std::string why;
  CHECK_FALSE(verify_certificate(tampered, &why));
  CHECK_FALSE(why.empty());

  auto wrong = sign_certificate("s", "negative", s, Rational(0), Rational(7, 100), -1);
  CHECK_FALSE(wrong.verified);

  // Non-strict claim with a double root at 1/2.
  auto sq = ExactPoly::linear_root(Rational(1, 2)).pow(2);
  CHECK_FALSE(sign_certificate("sq", "strict", sq, Rational(0), Rational(1), 1).verified);
  CHECK(sign_certificate("sq", "nonstrict", sq, Rational(0), Rational(1), 1, {{Rational(1, 2), 2}}).verified);

  BivariatePoly f({{5, 0, an(1)}, {4, 1, an(-1)}, {0, 3, an(-1)}});
  auto sub = subdivision_certificate(
      "box", "F >= 0",
      subdivision_positive_on_box(f, {Rational(1, 3), Rational(2, 3), Rational(0), Rational(1, 10)}, 30));
  CHECK(sub.verified);
  auto broken = sub;
  auto& tree = std::get<SubdivisionResult>(broken.witness).tree;
  for (auto& node : tree)
    if (node.leaf) {
      node.lower = node.lower + an(1);
      break;
    }
  CHECK_FALSE(verify_certificate(broken));

  auto chain = chain_certificate("c", "1 < sqrt2 < 3/2", {step("a", an(1), "<", an(0, 1)),
                                                         step("b", an(0, 1), "<", AlgebraicNumber(Rational(3, 2)))});
  CHECK(chain.verified);
  auto bad_chain = chain_certificate("c", "sqrt2 < 7/5", {step("a", an(0, 1), "<", AlgebraicNumber(Rational(7, 5)))});
  CHECK_FALSE(bad_chain.verified);
}
