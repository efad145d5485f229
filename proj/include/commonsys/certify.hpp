#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "commonsys/certificate.hpp"
#include "commonsys/exactpoly.hpp"
#include "commonsys/multipoly.hpp"
#include "commonsys/rational.hpp"

namespace commonsys {

/// x^5 - (1-x) x^4 / sqrt2 - (1-x)^5 / (2 sqrt2)
ExactPoly prevalence_factor_poly();
/// x^9 + (1/2)(1-x)^4 * prevalence_factor_poly()
ExactPoly prevalence_bound_poly();
/// 2^-10 + 2^-8 x - 2^-3 x^2 - x^3
ExactPoly geometric_margin_poly();
/// a^5 - a^4 x - x^3 for fixed a, as a polynomial in x.
ExactPoly local_sidorenko_slice(const Rational& a);
/// The same form in both variables (alpha, x).
BivariatePoly local_sidorenko_form();
/// x^k + (1-x)^k - 2^(1-k)
ExactPoly convexity_poly(unsigned k);

/// P(beta, T4, T5) = A * B with alpha = 1/2 + beta,
/// A = alpha^9 + alpha^5 T4 + alpha^4 T5 + T4 T5 and
/// B = (1-alpha)^9 + (1-alpha)^5 T4 - (1-alpha)^4 T5 - T4 T5.
MultiPoly geometric_product_poly();

struct LemmaSuiteOptions {
  /// Self-test: certify the sign of -q instead of q, which must fail.
  bool negate_q = false;
};

/// The seven lemma-level claims, each with its certificate (verified or
/// not). Never throws on a false claim.
std::vector<Certificate> lemma_suite(const LemmaSuiteOptions& options = {});

/// lemma_suite plus a VerificationFailed error naming the first failure.
std::vector<Certificate> verify_lemma_suite(const LemmaSuiteOptions& options = {});

struct C0Result {
  Rational c0;
  AlgebraicNumber exact;  // prevalence_bound_poly at 9/20
  Certificate certificate;
};
C0Result derive_c0();

struct C1Result {
  Rational c1;
  Rational root_lo;  // bracket of the positive root at alpha = 1/3
  Rational root_hi;
  std::vector<Certificate> certificates;
};
C1Result derive_c1();

/// Box check of the local Sidorenko form on [1/3, 2/3] x [0, width].
SubdivisionResult local_sidorenko_box(const Rational& width, unsigned max_depth = 40);

struct GeometricConstants {
  Rational c2;
  Rational t4_max;
  Rational t5_max;
  Rational c3;
  Rational C4;
  std::vector<std::string> face_notes;
  std::vector<Certificate> certificates;
};

/// c2 defaults to the largest k/1024 keeping t4_max <= 7/100; an explicit
/// value (e.g. 0 for the collapsed box) overrides the search.
GeometricConstants derive_c2_c3_C4(std::optional<Rational> c2 = std::nullopt, unsigned pieces = 64);

struct ConditionSlack {
  int index = 0;
  std::string statement;
  Rational lhs;
  Rational rhs;
  bool holds = false;
  Rational slack() const { return Rational(lhs - rhs); }
};

struct SlackRow {
  std::uint64_t l = 0;
  std::vector<ConditionSlack> conditions;
  bool all_hold = false;
  /// c5 / sqrt(l) <= 1/6, so the three cases cover every (alpha, ||g^||).
  bool coverage = false;
};

struct ConstantLedger {
  Rational c0, c1, c2, c3, C4, c5, c6;
  Rational t4_max, t5_max;
  AlgebraicNumber c0_exact;
  Rational c1_root_lo, c1_root_hi;
  /// Upper end of the enclosure of ln(2^-8 / c0).
  Rational log_gap;
  std::uint64_t l0 = 0;
  std::vector<SlackRow> slack;
  std::vector<std::string> face_notes;
  std::vector<Certificate> certificates;
};

inline constexpr std::uint64_t kL0SearchCap = 10'000'000;

/// Replays the four l-conditions for a given l.
SlackRow check_l(const ConstantLedger& ledger, std::uint64_t l);

/// Fills c5, c6, l0, the slack table for {l0, 2 l0, 10 l0} and their
/// certificates from c0..C4 already in the ledger. Throws NoSuchL.
void derive_l0(ConstantLedger& ledger);

/// All derivations in dependency order.
ConstantLedger derive_constants();

}  // namespace commonsys
