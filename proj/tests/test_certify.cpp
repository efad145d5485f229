#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "commonsys/certify.hpp"
#include "commonsys/error.hpp"
#include "oracles.hpp"

using namespace commonsys;

namespace {

const ConstantLedger& ledger() {
  static const ConstantLedger L = derive_constants();
  return L;
}

double q_double(double x) {
  const double r2 = std::sqrt(2.0);
  return std::pow(x, 5) - (1 - x) * std::pow(x, 4) / r2 - std::pow(1 - x, 5) / (2 * r2);
}

double qtilde_double(double x) { return std::pow(x, 9) + 0.5 * std::pow(1 - x, 4) * q_double(x); }

Rational rnd(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<long> k(0, 1 << 20);
  return Rational(lo + (hi - lo) * oracle::frac(k(rng), 1 << 20));
}

}  // namespace

TEST_CASE("polynomials match their defining formulas") {
  for (double x : {0.0, 0.1, 0.25, 0.45, 0.5, 0.9}) {
    auto xr = rational_from_double(x);
    CHECK(to_double(eval_exact(prevalence_factor_poly(), xr)) == doctest::Approx(q_double(x)).epsilon(1e-12));
    CHECK(to_double(eval_exact(prevalence_bound_poly(), xr)) == doctest::Approx(qtilde_double(x)).epsilon(1e-12));
    CHECK(to_double(eval_exact(geometric_margin_poly(), xr)) ==
          doctest::Approx(std::pow(2.0, -10) + std::pow(2.0, -8) * x - x * x / 8 - x * x * x).epsilon(1e-12));
    CHECK(to_double(eval_exact(convexity_poly(9), xr)) ==
          doctest::Approx(std::pow(x, 9) + std::pow(1 - x, 9) - std::pow(2.0, -8)).epsilon(1e-12));
  }
}

TEST_CASE("lemma suite") {
  auto certs = lemma_suite();
  REQUIRE(certs.size() == 7);
  std::set<std::string> ids;
  for (const auto& c : certs) {
    CHECK(c.verified);
    CHECK(verify_certificate(c));
    ids.insert(c.id);
  }
  CHECK(ids == std::set<std::string>{"lemma.i", "lemma.ii", "lemma.iii", "lemma.iv", "lemma.v", "lemma.vi",
                                     "lemma.vii"});
  CHECK_NOTHROW(verify_lemma_suite());
}

TEST_CASE("negated claim fails on the q certificate") {
  auto certs = lemma_suite({true});
  for (const auto& c : certs) CHECK(c.verified == (c.id != "lemma.iii"));
  try {
    verify_lemma_suite({true});
    FAIL("expected VerificationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VerificationFailed);
    CHECK(std::string(e.what()).find("lemma.iii") != std::string::npos);
  }
}

TEST_CASE("factorization identity at random rational points") {
  std::mt19937_64 rng(1);
  auto two = [](int e) { return Rational(1, 1L << e); };
  for (int rep = 0; rep < 50; ++rep) {
    Rational t4 = rnd(rng, Rational(-1), Rational(1)), t5 = rnd(rng, Rational(-1), Rational(1));
    Rational lhs = (two(9) + two(5) * t4 + two(4) * t5 + t4 * t5) * (two(9) + two(5) * t4 - two(4) * t5 - t4 * t5);
    Rational rhs = (two(4) + t4) * (two(4) + t4) * (two(10) - t5 * t5);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("c0") {
  auto r = derive_c0();
  CHECK(r.certificate.verified);
  CHECK(sgn(r.c0) > 0);
  CHECK(r.exact == eval_exact(prevalence_bound_poly(), Rational(9, 20)));
  CHECK(compare(AlgebraicNumber(r.c0), r.exact) <= 0);
  CHECK(to_double(r.c0) == doctest::Approx(qtilde_double(0.45)).epsilon(1e-6));
  // Frozen value: any change to the polynomial or rounding shows up here.
  CHECK(r.c0 == Rational(14294101, 250000000000L));
  CHECK(r.exact == AlgebraicNumber(Rational(1639377387, 1024000000000L), Rational(-4471258913L, 4096000000000L)));
}

TEST_CASE("c1") {
  auto r = derive_c1();
  for (const auto& c : r.certificates) CHECK(c.verified);
  CHECK(sgn(r.c1) > 0);
  CHECK(r.c1 < r.root_lo);
  CHECK(to_double(r.root_lo) <= 0.134823518084692 + 1e-12);
  CHECK(to_double(r.root_hi) >= 0.134823518084692 - 1e-12);
  // Independent double root of (1/3)^5 - (1/3)^4 x - x^3.
  double lo = 0, hi = 1;
  for (int k = 0; k < 80; ++k) {
    double mid = (lo + hi) / 2;
    (std::pow(3.0, -5) - std::pow(3.0, -4) * mid - mid * mid * mid > 0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(0.134823518084692).epsilon(1e-12));

  auto wider = local_sidorenko_box(Rational(r.c1 + Rational(1, 10)));
  CHECK_FALSE(wider.positive);
  REQUIRE(wider.witness.has_value());
  CHECK(an_sign(local_sidorenko_form().eval(wider.witness->first, wider.witness->second)) < 0);

  auto half = local_sidorenko_box(Rational(r.c1 / 2));
  CHECK(half.positive);
}

TEST_CASE("the box inequality binds at alpha = 1/3") {
  // Sampled on a grid, the slack a^5 - a^4 x - x^3 at x = c1 is smallest at a = 1/3.
  auto r = derive_c1();
  auto f = local_sidorenko_form();
  auto at_third = f.eval(Rational(1, 3), r.c1);
  for (int k = 0; k <= 60; ++k) {
    Rational a = Rational(1, 3) + oracle::frac(k, 180);
    CHECK(compare(f.eval(a, r.c1), at_third) >= 0);
  }
}

TEST_CASE("c2, c3 and C4") {
  auto g = derive_c2_c3_C4();
  for (const auto& c : g.certificates) CHECK(c.verified);
  CHECK(sgn(g.c2) > 0);
  CHECK(g.c2 <= Rational(1, 6));
  CHECK(Rational(g.c2 * 1024).get_den() == 1);
  CHECK(g.t4_max <= Rational(7, 100));
  CHECK(g.t4_max == pow(Rational(1, 2) + g.c2, 4) / 2);
  CHECK(sgn(g.c3) > 0);
  CHECK(sgn(g.C4) > 0);
  CHECK(g.face_notes.size() >= 3);
  // c2 is the largest k/1024 that keeps T4max within range.
  Rational next = g.c2 + Rational(1, 1024);
  CHECK((next > Rational(1, 6) || pow(Rational(1, 2) + next, 4) / 2 > Rational(7, 100)));

  // c3 lower-bounds s/8 on [0, T4max], by sampling.
  auto s = geometric_margin_poly();
  for (int k = 0; k <= 200; ++k) {
    Rational x = g.t4_max * oracle::frac(k, 200);
    CHECK(compare(eval_exact(s, x), AlgebraicNumber(Rational(8 * g.c3))) >= 0);
  }

  // C4 bounds |dP/dbeta| on the box, by sampling.
  auto dP = geometric_product_poly().derivative(0);
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<Rational> pt{rnd(rng, Rational(-g.c2), g.c2), rnd(rng, Rational(0), g.t4_max),
                             rnd(rng, Rational(-g.t5_max), g.t5_max)};
    Rational v = dP.eval(pt);
    CHECK(abs(v) <= g.C4);
  }
}

TEST_CASE("collapsed box") {
  auto g = derive_c2_c3_C4(Rational(0));
  CHECK(g.c2 == 0);
  CHECK(g.t4_max == Rational(1, 32));
  CHECK(g.C4 >= 0);
  for (const auto& c : g.certificates) CHECK(c.verified);
  // At beta = 0 the product is exactly (2^-4 + T4)^2 (2^-10 - T5^2).
  auto P = geometric_product_poly();
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    Rational t4 = rnd(rng, Rational(0), Rational(1, 32)), t5 = rnd(rng, Rational(-1, 32), Rational(1, 32));
    Rational want = (Rational(1, 16) + t4) * (Rational(1, 16) + t4) * (Rational(1, 1024) - t5 * t5);
    CHECK(P.eval({Rational(0), t4, t5}) == want);
  }
  CHECK_THROWS_AS(derive_c2_c3_C4(Rational(1, 5)), Error);
}

TEST_CASE("constant ledger") {
  const auto& L = ledger();
  for (const Rational* c : {&L.c0, &L.c1, &L.c3, &L.c5, &L.c6}) CHECK(sgn(*c) > 0);
  CHECK(sgn(L.c2) > 0);
  CHECK(L.c2 <= Rational(1, 6));
  CHECK(L.C4 >= 0);
  CHECK(L.l0 >= 1);
  CHECK(L.l0 <= kL0SearchCap);

  REQUIRE(L.slack.size() == 3);
  CHECK(L.slack[0].l == L.l0);
  CHECK(L.slack[1].l == 2 * L.l0);
  CHECK(L.slack[2].l == 10 * L.l0);
  for (const auto& row : L.slack) {
    CHECK(row.all_hold);
    CHECK(row.coverage);
    REQUIRE(row.conditions.size() == 4);
    for (const auto& c : row.conditions) {
      CHECK(c.holds);
      CHECK(sgn(c.slack()) >= 0);
    }
  }

  for (const auto& c : L.certificates) {
    std::string why;
    CHECK_MESSAGE(verify_certificate(c, &why), c.id << ": " << why);
    CHECK(c.verified);
  }
}

TEST_CASE("l0 is the smallest value that works") {
  const auto& L = ledger();
  auto below = check_l(L, L.l0 - 1);
  CHECK_FALSE(below.all_hold);
  // Replaying the table from the stored constants gives the same numbers.
  auto again = check_l(L, L.l0);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(again.conditions[k].lhs == L.slack[0].conditions[k].lhs);
    CHECK(again.conditions[k].rhs == L.slack[0].conditions[k].rhs);
  }
  // The first two conditions only get easier as l grows.
  auto quad = check_l(L, 4 * L.l0);
  CHECK(quad.conditions[0].holds);
  CHECK(quad.conditions[1].holds);
  CHECK(quad.conditions[0].slack() >= L.slack[0].conditions[0].slack());
  CHECK(quad.conditions[1].slack() >= L.slack[0].conditions[1].slack());
  CHECK_FALSE(check_l(L, 100).all_hold);
}

TEST_CASE("exp and log enclosures behind the ledger") {
  const auto& L = ledger();
  // c5 certificate: exp(-2 c5^2)(1 + 2^8 c6) > 1.
  double c5 = to_double(L.c5), c6 = to_double(L.c6);
  CHECK(std::exp(-2 * c5 * c5) * (1 + 256 * c6) > 1);
  // The log gap encloses ln(2^-8 / c0) from above.
  CHECK(to_double(L.log_gap) >= std::log(std::pow(2.0, -8) / to_double(L.c0)) - 1e-12);
  CHECK(to_double(L.log_gap) <= std::log(std::pow(2.0, -8) / to_double(L.c0)) + 1e-9);
  // Condition (4) in its original form, in floating point.
  double l = static_cast<double>(L.l0);
  CHECK(std::log(to_double(L.c0)) + l * std::log1p(2 * c5 / std::sqrt(l)) >= -8 * std::log(2.0) - 1e-12);
  // Condition (3) in its original form.
  CHECK((l / 2) * std::log1p(-4 * c5 * c5 / l) + std::log1p(256 * c6) >= -1e-12);
}

TEST_CASE("derivation is deterministic") {
  auto again = derive_constants();
  const auto& L = ledger();
  CHECK(again.c0 == L.c0);
  CHECK(again.c1 == L.c1);
  CHECK(again.c2 == L.c2);
  CHECK(again.c3 == L.c3);
  CHECK(again.C4 == L.C4);
  CHECK(again.c5 == L.c5);
  CHECK(again.c6 == L.c6);
  CHECK(again.l0 == L.l0);
}

TEST_CASE("rational helpers") {
  CHECK(floor_to(Rational(7, 3), mpz_class(10)) == Rational(23, 10));
  CHECK(ceil_to(Rational(7, 3), mpz_class(10)) == Rational(12, 5));
  auto s = sqrt_lower(Rational(2), mpz_class(1000000)), S = sqrt_upper(Rational(2), mpz_class(1000000));
  CHECK(s * s <= 2);
  CHECK(S * S >= 2);
  CHECK(S - s <= Rational(2, 1000000));
  auto e = ln_enclosure(Rational(3));
  CHECK(e.lo <= e.hi);
  CHECK(to_double(e.lo) <= std::log(3.0) + 1e-15);
  CHECK(to_double(e.hi) >= std::log(3.0) - 1e-15);
  CHECK(to_double(Rational(e.hi - e.lo)) < 1e-15);
  auto x = Rational(1, 3);
  CHECK(to_double(exp_neg_lower(x)) <= std::exp(-1.0 / 3));
  CHECK(to_double(exp_neg_lower(x)) >= std::exp(-1.0 / 3) - 1e-4);
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-2.5E+2") == Rational(-250));
  CHECK(rational_from_double(0.1) == Rational(1, 10));
}
