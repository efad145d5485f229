#include "commonsys/certify.hpp"

#include <algorithm>

#include "commonsys/error.hpp"

namespace commonsys {

namespace {

AlgebraicNumber an(const Rational& q) { return AlgebraicNumber(q); }
AlgebraicNumber an(long v) { return AlgebraicNumber(v); }

Rational two_pow(long e) {
  Rational r = 1;
  if (e >= 0) mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

mpz_class ten_pow(unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

ExactPoly one_minus_x() { return ExactPoly({an(1), an(-1)}); }

Certificate require(Certificate c) {
  if (!c.verified) {
    std::string why;
    verify_certificate(c, &why);
    throw Error(Errc::VerificationFailed, c.id + ": " + c.claim + (why.empty() ? "" : " (" + why + ")"));
  }
  return c;
}

}  // namespace

ExactPoly prevalence_factor_poly() {
  const ExactPoly x = ExactPoly::x();
  const AlgebraicNumber inv_sqrt2(Rational(0), Rational(1, 2));   // 1/sqrt2
  const AlgebraicNumber inv_2sqrt2(Rational(0), Rational(1, 4));  // 1/(2 sqrt2)
  return x.pow(5) - (one_minus_x() * x.pow(4)).scaled(inv_sqrt2) - one_minus_x().pow(5).scaled(inv_2sqrt2);
}

ExactPoly prevalence_bound_poly() {
  return ExactPoly::x().pow(9) + (one_minus_x().pow(4) * prevalence_factor_poly()).scaled(an(Rational(1, 2)));
}

ExactPoly geometric_margin_poly() {
  return ExactPoly({an(two_pow(-10)), an(two_pow(-8)), an(Rational(-1, 8)), an(-1)});
}

ExactPoly local_sidorenko_slice(const Rational& a) {
  return ExactPoly({an(pow(a, 5)), an(Rational(-pow(a, 4))), an(0), an(-1)});
}

BivariatePoly local_sidorenko_form() {
  return BivariatePoly({{5, 0, an(1)}, {4, 1, an(-1)}, {0, 3, an(-1)}});
}

ExactPoly convexity_poly(unsigned k) {
  return ExactPoly::x().pow(k) + one_minus_x().pow(k) - ExactPoly::constant(an(two_pow(1 - static_cast<long>(k))));
}

MultiPoly geometric_product_poly() {
  const std::size_t V = 3;
  MultiPoly beta = MultiPoly::variable(V, 0), t4 = MultiPoly::variable(V, 1), t5 = MultiPoly::variable(V, 2);
  MultiPoly half = MultiPoly::constant(V, Rational(1, 2));
  MultiPoly a = half + beta, b = half - beta;
  MultiPoly A = a.pow(9) + a.pow(5) * t4 + a.pow(4) * t5 + t4 * t5;
  MultiPoly B = b.pow(9) + b.pow(5) * t4 - b.pow(4) * t5 - t4 * t5;
  return A * B;
}

namespace {

IdentityWitness factorization_identity() {
  const std::size_t V = 2;
  MultiPoly t4 = MultiPoly::variable(V, 0), t5 = MultiPoly::variable(V, 1);
  auto c = [&](long e) { return MultiPoly::constant(V, two_pow(e)); };
  IdentityWitness w;
  w.variable_names = {"T4", "T5"};
  w.lhs_factors = {c(-9) + Rational(two_pow(-5)) * t4 + Rational(two_pow(-4)) * t5 + t4 * t5,
                   c(-9) + Rational(two_pow(-5)) * t4 - Rational(two_pow(-4)) * t5 - t4 * t5};
  w.rhs_factors = {c(-4) + t4, c(-4) + t4, c(-10) - t5 * t5};
  return w;
}

}  // namespace

SubdivisionResult local_sidorenko_box(const Rational& width, unsigned max_depth) {
  return subdivision_positive_on_box(local_sidorenko_form(), Box{Rational(1, 3), Rational(2, 3), Rational(0), width},
                                     max_depth);
}

C0Result derive_c0() {
  const Rational point(9, 20);
  AlgebraicNumber exact = eval_exact(prevalence_bound_poly(), point);
  Rational c0 = floor_to(lower_bound(exact, ten_pow(20)), ten_pow(12));
  Certificate cert = chain_certificate(
      "c0", "T(f) >= c0 whenever E f >= 9/20",
      {step("qtilde(9/20) >= c0 (exact comparison in Q(sqrt2))", exact, ">=", an(c0)), step("c0 > 0", an(c0), ">", an(0))});
  cert.notes = {"qtilde(9/20) = " + to_string(exact),
                "lower bound on T at mean 9/20 uses q < 0 on [0, 1/2] (lemma.iii); monotonicity in the mean extends it"};
  return {c0, exact, require(std::move(cert))};
}

C1Result derive_c1() {
  const Rational third(1, 3);
  ExactPoly slice = local_sidorenko_slice(third);
  RootBracket br = isolate_positive_root(slice, Rational(0), Rational(1), Rational(1, 1000000000));
  Rational c1 = floor_to(Rational(br.lo - Rational(1, 1000000)), ten_pow(7));

  C1Result out;
  out.c1 = c1;
  out.root_lo = br.lo;
  out.root_hi = br.hi;

  Certificate root = sign_certificate("c1.slice", "a^5 - a^4 x - x^3 > 0 at a = 1/3 for x in [0, c1]", slice,
                                      Rational(0), c1, 1);
  root.notes = {"positive root bracket [" + to_string(br.lo) + ", " + to_string(br.hi) + "]",
                "alpha = 1/3 is binding: the form increases in alpha when 5 alpha > 4 x"};
  out.certificates.push_back(require(std::move(root)));

  Certificate box = subdivision_certificate("c1", "a^5 - a^4 x - x^3 >= 0 on [1/3, 2/3] x [0, c1]",
                                            local_sidorenko_box(c1));
  out.certificates.push_back(require(std::move(box)));
  return out;
}

std::vector<Certificate> lemma_suite(const LemmaSuiteOptions& options) {
  std::vector<Certificate> out;
  const Rational zero(0), half(1, 2), one(1);

  out.push_back(sign_certificate("lemma.i", "alpha^9 + (1-alpha)^9 >= 2^-8 on [0, 1]", convexity_poly(9), zero, one, 1,
                                 {{half, 2}}));

  ExactPoly x = ExactPoly::x();
  out.push_back(sign_certificate("lemma.ii", "alpha^5 + alpha^4 (1-alpha) >= 0 on [0, 1/2]",
                                 x.pow(5) + x.pow(4) * one_minus_x(), zero, half, 1, {{zero, 4}}));

  ExactPoly q = prevalence_factor_poly();
  if (options.negate_q) q = -q;
  out.push_back(sign_certificate("lemma.iii", "q(x) < 0 on [0, 1/2]", q, zero, half, -1));

  AlgebraicNumber qt = eval_exact(prevalence_bound_poly(), Rational(9, 20));
  out.push_back(chain_certificate("lemma.iv", "qtilde(9/20) > 0", {step("qtilde(9/20) > 0", qt, ">", an(0))}));
  out.back().notes = {"qtilde(9/20) = " + to_string(qt)};

  C1Result c1 = derive_c1();
  Certificate box = c1.certificates.back();
  box.id = "lemma.v";
  box.notes = {"c1 = " + to_string(c1.c1)};
  out.push_back(std::move(box));

  out.push_back(sign_certificate("lemma.vi", "s(x) > 0 on [0, 7/100]", geometric_margin_poly(), zero,
                                 Rational(7, 100), 1));

  out.push_back(identity_certificate(
      "lemma.vii",
      "(2^-9 + 2^-5 T4 + 2^-4 T5 + T4 T5)(2^-9 + 2^-5 T4 - 2^-4 T5 - T4 T5) = (2^-4 + T4)^2 (2^-10 - T5^2)",
      factorization_identity()));
  return out;
}

std::vector<Certificate> verify_lemma_suite(const LemmaSuiteOptions& options) {
  auto certs = lemma_suite(options);
  for (const auto& c : certs) require(c);
  return certs;
}

GeometricConstants derive_c2_c3_C4(std::optional<Rational> c2_override, unsigned pieces) {
  if (pieces == 0) throw Error(Errc::InvalidArgument, "pieces must be positive");
  GeometricConstants g;
  const Rational half(1, 2), cap(7, 100);
  auto t4_bound = [&](const Rational& c2) { return Rational(pow(Rational(half + c2), 4) / 2); };

  if (c2_override) {
    g.c2 = *c2_override;
    if (sgn(g.c2) < 0 || g.c2 > Rational(1, 6) || t4_bound(g.c2) > cap)
      throw Error(Errc::InvalidArgument, "c2 must lie in [0, 1/6] with (1/2 + c2)^4 / 2 <= 7/100");
  } else {
    long k = 0;
    while (k < 1024 && t4_bound(Rational(k + 1, 1024)) <= cap && Rational(k + 1, 1024) <= Rational(1, 6)) ++k;
    g.c2 = Rational(k, 1024);
    g.c2.canonicalize();
  }
  g.t4_max = t4_bound(g.c2);
  const Rational sqrt2_hi = sqrt_upper(Rational(2), ten_pow(12));
  g.t5_max = Rational(((half + g.c2) * sqrt2_hi / 2 + 2 * g.c2) * g.t4_max);

  {
    std::vector<ChainStep> st = {step("(1/2 + c2)^4 / 2 <= 7/100", an(g.t4_max), "<=", an(cap)),
                                 step("c2 <= 1/6", an(g.c2), "<=", an(Rational(1, 6)))};
    if (!c2_override) {
      Rational next = Rational(g.c2 + Rational(1, 1024));
      if (next > Rational(1, 6)) st.push_back(step("the next multiple of 1/1024 exceeds 1/6", an(next), ">", an(Rational(1, 6))));
      else st.push_back(step("the next multiple of 1/1024 overshoots 7/100", an(t4_bound(next)), ">", an(cap)));
    }
    st.push_back(step("sqrt2_hi^2 >= 2", an(Rational(sqrt2_hi * sqrt2_hi)), ">=", an(2)));
    Certificate c = chain_certificate("c2", "|alpha - 1/2| <= c2 keeps T4 in [0, 7/100]", std::move(st));
    c.notes = {"c2 = " + to_string(g.c2), "T4max = " + to_string(g.t4_max), "T5max = " + to_string(g.t5_max)};
    g.certificates.push_back(require(std::move(c)));
  }

  g.face_notes = {
      "beta = alpha - 1/2 in [-c2, c2]: hypothesis of the geometric lemma",
      "T4 in [0, T4max]: T4 = sum |g^|^4 >= 0 and T4 <= sup|g^|^2 sum|g^|^2 <= (||g||inf^2 / 2) ||g||inf^2, "
      "||g||inf <= max(alpha, 1 - alpha) <= 1/2 + c2",
      "|T5| <= T5max: |T5| <= sup|g^| T4 <= (||g||inf / sqrt2) T4, widened by 2 c2 T4max",
      "at beta = 0, T5^2 <= T4^2 / 8: 2 sup|g^|^2 <= E g^2 <= alpha (1 - alpha) <= 1/4"};

  // c3 from the concave margin polynomial on [0, T4max].
  ExactPoly s = geometric_margin_poly();
  Rational s0 = eval_exact(s, Rational(0)).a, s1 = eval_exact(s, g.t4_max).a;
  g.c3 = floor_to(Rational(std::min(s0, s1) / 8), ten_pow(15));
  g.certificates.push_back(require(sign_certificate("c3.concave", "s''(x) < 0 on [0, T4max]",
                                                    s.derivative().derivative(), Rational(0), g.t4_max, -1)));
  g.certificates.push_back(require(chain_certificate(
      "c3", "2^-3 s(T4) >= c3 for T4 in [0, T4max]",
      {step("s(0) >= 8 c3", an(s0), ">=", an(Rational(8 * g.c3))),
       step("s(T4max) >= 8 c3", an(s1), ">=", an(Rational(8 * g.c3))), step("c3 > 0", an(g.c3), ">", an(0))})));

  // C4 bounds |dP/dbeta| over the box.
  MultiPoly dP = geometric_product_poly().derivative(0);
  std::vector<std::vector<RationalInterval>> boxes;
  const Rational width = Rational(2 * g.c2 / pieces);
  for (unsigned k = 0; k < pieces; ++k) {
    Rational lo = Rational(-g.c2 + width * k), hi = Rational(-g.c2 + width * (k + 1));
    boxes.push_back({{lo, hi}, {Rational(0), g.t4_max}, {Rational(-g.t5_max), g.t5_max}});
  }
  Certificate c4 = box_bound_certificate("C4", "|dP/dbeta| <= C4 on [-c2, c2] x [0, T4max] x [-T5max, T5max]", dP,
                                         {"beta", "T4", "T5"}, std::move(boxes));
  auto& w = std::get<BoxBoundWitness>(c4.witness);
  w.bound = ceil_to(w.bound, ten_pow(9));
  g.C4 = w.bound;
  c4.verified = verify_certificate(c4);
  c4.notes = {"P(beta, T4, T5) >= P(0, T4, T5) - C4 |beta| by the mean value theorem in beta"};
  g.certificates.push_back(require(std::move(c4)));
  return g;
}

namespace {

Rational epsilon_of(const ConstantLedger& L) { return Rational(L.c3 * pow(L.c1, 4) / 2); }

}  // namespace

SlackRow check_l(const ConstantLedger& L, std::uint64_t l) {
  if (l == 0) throw Error(Errc::InvalidArgument, "l must be positive");
  SlackRow row;
  row.l = l;
  const Rational ql(static_cast<unsigned long>(l));
  const Rational m = std::min(L.c2, Rational(1, 6));
  const Rational eps = epsilon_of(L);
  const Rational c5sq = Rational(L.c5 * L.c5);
  const Rational y = Rational(256 * L.c6);

  row.conditions.push_back({1, "c5/sqrt(l) <= min(c2, 1/6)  <=>  min(c2,1/6)^2 l >= c5^2", Rational(m * m * ql), c5sq});
  row.conditions.push_back({2, "C4 c5/sqrt(l) <= c3 c1^4 / 2  <=>  (c3 c1^4/2)^2 l >= C4^2 c5^2", Rational(eps * eps * ql),
                            Rational(L.C4 * L.C4 * c5sq)});
  Rational lhs3 = -1;
  if (ql > 4 * c5sq) lhs3 = Rational(y - y * y / 2 - 2 * c5sq - 4 * c5sq * c5sq / (ql - 4 * c5sq));
  row.conditions.push_back({3, "(1 - 4c5^2/l)^(l/2) (1 + 2^8 c6) >= 1, via y - y^2/2 - 2c5^2 - 4c5^4/(l - 4c5^2) >= 0",
                            lhs3, Rational(0)});
  row.conditions.push_back({4, "c0 (1 + 2c5/sqrt(l))^l >= 2^-8, via 2c5 sqrt(l) - 2c5^2 >= ln(2^-8/c0)",
                            Rational(2 * L.c5 * sqrt_lower(ql, ten_pow(6)) - 2 * c5sq), L.log_gap});
  row.all_hold = true;
  for (auto& c : row.conditions) {
    c.holds = c.lhs >= c.rhs;
    row.all_hold = row.all_hold && c.holds;
  }
  row.coverage = 36 * c5sq <= ql;
  return row;
}

void derive_l0(ConstantLedger& L) {
  const Rational eps = epsilon_of(L);
  if (sgn(eps) <= 0 || sgn(L.c0) <= 0 || sgn(L.C4) < 0) throw Error(Errc::InvalidArgument, "ledger inputs not positive");

  // c6 <= 2 sqrt(2^-18 + eps) - 2^-8
  const Rational base = Rational(two_pow(-18) + eps);
  L.c6 = floor_to(Rational(2 * sqrt_lower(base, ten_pow(20)) - two_pow(-8)), ten_pow(15));
  L.certificates.push_back(require(chain_certificate(
      "c6", "2 sqrt(2^-18 + c3 c1^4 / 2) >= 2^-8 + c6",
      {step("2^-18 + c3 c1^4/2 >= ((2^-8 + c6)/2)^2", an(base), ">=",
            an(Rational(pow(Rational((two_pow(-8) + L.c6) / 2), 2)))),
       step("c6 > 0", an(L.c6), ">", an(0))})));

  const Rational y = Rational(256 * L.c6);
  L.log_gap = ln_enclosure(Rational(two_pow(-8) / L.c0)).hi;
  const Rational ln1y_lo = ln_enclosure(Rational(1 + y)).lo;

  // Balance conditions (2) and (4), capped well inside e^{-2c5^2}(1+y) > 1.
  Rational c5 = sqrt_lower(Rational(L.log_gap * eps / (2 * std::max(L.C4, Rational(1, 1000000000)))), ten_pow(12));
  Rational cap = Rational(Rational(7, 10) * sqrt_lower(Rational(ln1y_lo / 2), ten_pow(12)));
  L.c5 = floor_to(std::min(c5, cap), ten_pow(9));
  if (sgn(L.c5) <= 0) throw Error(Errc::VerificationFailed, "c5 rounded to zero");
  const Rational two_c5sq = Rational(2 * L.c5 * L.c5);
  L.certificates.push_back(require(chain_certificate(
      "c5", "exp(-2 c5^2)(1 + 2^8 c6) > 1",
      {step("c5 > 0", an(L.c5), ">", an(0)), step("2 c5^2 <= 1", an(two_c5sq), "<=", an(1)),
       step("(1 - x + x^2/2 - ... - x^7/7!)(1 + 2^8 c6) > 1 at x = 2 c5^2",
            an(Rational(exp_neg_lower(two_c5sq) * (1 + y))), ">", an(1))})));

  auto holds = [&](std::uint64_t l) { return check_l(L, l).all_hold; };
  std::uint64_t hi = 1;
  while (!holds(hi)) {
    if (hi >= kL0SearchCap) throw Error(Errc::NoSuchL, "no l <= 10^7 satisfies all conditions");
    hi = std::min<std::uint64_t>(hi * 2, kL0SearchCap);
  }
  std::uint64_t lo = hi / 2;  // fails (or zero)
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (holds(mid)) hi = mid;
    else lo = mid;
  }
  L.l0 = hi;

  SlackRow at = check_l(L, L.l0);
  std::vector<ChainStep> st;
  for (const auto& c : at.conditions)
    st.push_back(step("condition " + std::to_string(c.index) + " at l0", an(c.lhs), ">=", an(c.rhs)));
  if (L.l0 > 1) {
    SlackRow before = check_l(L, L.l0 - 1);
    for (const auto& c : before.conditions)
      if (!c.holds) {
        st.push_back(step("condition " + std::to_string(c.index) + " fails at l0 - 1", an(c.lhs), "<", an(c.rhs)));
        break;
      }
  }
  st.push_back(step("coverage: 36 c5^2 <= l0", an(Rational(18 * two_c5sq)), "<=",
                    an(Rational(static_cast<unsigned long>(L.l0)))));
  Certificate lc = chain_certificate("l0", "all four conditions hold at l0 and are nondecreasing in l", std::move(st));
  lc.notes = {"l0 = " + std::to_string(L.l0),
              "each condition's left side is nondecreasing in l and its right side is constant, so it holds for "
              "every l >= l0"};
  L.certificates.push_back(require(std::move(lc)));

  // Convexity for the exponents l + 9, l >= l0, by expansion around 1/2:
  // (1/2+s)^k + (1/2-s)^k - 2^(1-k) = sum over even j >= 2 of 2 C(k,j) 2^(j-k) s^j.
  const long k = static_cast<long>(L.l0) + 9;
  Rational c2coef = Rational(Rational(static_cast<unsigned long>(k) * static_cast<unsigned long>(k - 1)) * two_pow(2 - k));
  Certificate conv = chain_certificate(
      "convexity.l0", "x^k + (1-x)^k >= 2^(1-k) on [0,1] for k = l0 + 9 (and every k >= 2)",
      {step("s^0 coefficient 2 * 2^-k equals 2^(1-k)", an(Rational(2 * two_pow(-k))), "==", an(two_pow(1 - k))),
       step("s^1 coefficients cancel: k 2^(1-k) - k 2^(1-k)", an(0), "==", an(0)),
       step("s^2 coefficient 2 C(k,2) 2^(2-k) > 0", an(c2coef), ">", an(0))});
  conv.notes = {"k = " + std::to_string(k),
                "odd powers of s = x - 1/2 cancel and every even coefficient 2 C(k,j) 2^(j-k) is positive"};
  L.certificates.push_back(require(std::move(conv)));

  L.slack.clear();
  for (std::uint64_t l : {L.l0, 2 * L.l0, 10 * L.l0}) L.slack.push_back(check_l(L, l));
}

ConstantLedger derive_constants() {
  ConstantLedger L;
  C0Result c0 = derive_c0();
  L.c0 = c0.c0;
  L.c0_exact = c0.exact;
  L.certificates.push_back(c0.certificate);

  C1Result c1 = derive_c1();
  L.c1 = c1.c1;
  L.c1_root_lo = c1.root_lo;
  L.c1_root_hi = c1.root_hi;
  for (auto& c : c1.certificates) L.certificates.push_back(std::move(c));

  GeometricConstants g = derive_c2_c3_C4();
  L.c2 = g.c2;
  L.c3 = g.c3;
  L.C4 = g.C4;
  L.t4_max = g.t4_max;
  L.t5_max = g.t5_max;
  L.face_notes = g.face_notes;
  for (auto& c : g.certificates) L.certificates.push_back(std::move(c));

  derive_l0(L);
  return L;
}

}  // namespace commonsys
