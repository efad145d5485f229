#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "commonsys/exactpoly.hpp"
#include "commonsys/multipoly.hpp"
#include "commonsys/rational.hpp"

namespace commonsys {

enum class CertMethod { Sturm, Subdivision, RationalChain, Identity, BoxBound };
std::string to_string(CertMethod m);

/// Sign of `original` on [lo, hi]. The listed factors (x - r)^m are divided
/// out first; the quotient is then shown root-free by a Sturm count. With no
/// factors the claim is strict, otherwise it is the non-strict version.
struct SturmWitness {
  ExactPoly original;
  Rational lo;
  Rational hi;
  int claimed_sign = 1;
  std::vector<std::pair<Rational, unsigned>> factors;
  ExactPoly quotient;
  std::vector<ExactPoly> sequence;
  int variations_lo = 0;
  int variations_hi = 0;
  AlgebraicNumber value_lo;
  AlgebraicNumber value_hi;

  bool strict() const { return factors.empty(); }
};

/// One exact comparison `lhs rel rhs`, rel in {"<", "<=", "==", ">=", ">"}.
struct ChainStep {
  std::string label;
  AlgebraicNumber lhs;
  std::string rel;
  AlgebraicNumber rhs;
};

struct ChainWitness {
  std::vector<ChainStep> steps;
};

/// prod(lhs_factors) == prod(rhs_factors) as polynomials.
struct IdentityWitness {
  std::vector<std::string> variable_names;
  std::vector<MultiPoly> lhs_factors;
  std::vector<MultiPoly> rhs_factors;
};

/// |poly| <= bound on the union of the boxes. The boxes partition the range
/// of variable 0 into consecutive pieces and share the other ranges.
struct BoxBoundWitness {
  std::vector<std::string> variable_names;
  MultiPoly poly;
  std::vector<std::vector<RationalInterval>> boxes;
  std::vector<RationalInterval> enclosures;
  Rational bound;
};

using Witness = std::variant<SturmWitness, SubdivisionResult, ChainWitness, IdentityWitness, BoxBoundWitness>;

struct Certificate {
  std::string id;
  std::string claim;
  CertMethod method = CertMethod::RationalChain;
  Witness witness;
  bool verified = false;
  std::vector<std::string> notes;
};

/// Re-checks a witness from scratch. On failure `reason` (if given) explains
/// which check broke.
bool verify_certificate(const Certificate& c, std::string* reason = nullptr);

/// Builders: compute the witness, then set `verified` by running the
/// independent checker on it.
Certificate sign_certificate(std::string id, std::string claim, const ExactPoly& p, const Rational& lo,
                             const Rational& hi, int sign,
                             std::vector<std::pair<Rational, unsigned>> factors = {});
Certificate subdivision_certificate(std::string id, std::string claim, SubdivisionResult result);
Certificate chain_certificate(std::string id, std::string claim, std::vector<ChainStep> steps);
Certificate identity_certificate(std::string id, std::string claim, IdentityWitness w);
Certificate box_bound_certificate(std::string id, std::string claim, const MultiPoly& poly,
                                  std::vector<std::string> names,
                                  std::vector<std::vector<RationalInterval>> boxes);

/// Convenience for chain steps on rationals.
ChainStep step(std::string label, const AlgebraicNumber& lhs, std::string rel, const AlgebraicNumber& rhs);

}  // namespace commonsys
