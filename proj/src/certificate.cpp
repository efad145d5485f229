#include "commonsys/certificate.hpp"

#include <algorithm>

#include "commonsys/error.hpp"

namespace commonsys {

std::string to_string(CertMethod m) {
  switch (m) {
    case CertMethod::Sturm: return "sturm";
    case CertMethod::Subdivision: return "subdivision";
    case CertMethod::RationalChain: return "rational_chain";
    case CertMethod::Identity: return "identity";
    case CertMethod::BoxBound: return "box_bound";
  }
  return "?";
}

ChainStep step(std::string label, const AlgebraicNumber& lhs, std::string rel, const AlgebraicNumber& rhs) {
  return {std::move(label), lhs, std::move(rel), rhs};
}

namespace {

bool fail(std::string* reason, const std::string& why) {
  if (reason) *reason = why;
  return false;
}

// Sign changes at x, zeros skipped. Kept separate from the library routine on
// purpose: the checker should not share code paths with the prover.
int variations_at(const std::vector<ExactPoly>& seq, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& q : seq) {
    AlgebraicNumber v;
    for (std::size_t k = q.coeffs().size(); k-- > 0;) v = v * AlgebraicNumber(x) + q.coeffs()[k];
    int s = an_sign(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

// True when b == -c * a for some c > 0 (both nonzero).
bool negative_multiple(const ExactPoly& b, const ExactPoly& a) {
  if (a.is_zero() || b.is_zero() || a.degree() != b.degree()) return false;
  AlgebraicNumber ratio = b.leading() / a.leading();
  if (an_sign(ratio) >= 0) return false;
  return a.scaled(ratio) == b;
}

bool check_sturm(const SturmWitness& w, std::string* reason) {
  if (!(w.lo < w.hi)) return fail(reason, "empty interval");
  if (w.claimed_sign != 1 && w.claimed_sign != -1) return fail(reason, "claimed sign must be +-1");

  // Rebuild the original from the quotient and factors.
  ExactPoly rebuilt = w.quotient;
  int factor_sign = 1;
  for (const auto& [r, m] : w.factors) {
    if (m == 0) return fail(reason, "zero multiplicity");
    rebuilt = rebuilt * ExactPoly::linear_root(r).pow(m);
    if (m % 2 == 0) continue;
    if (r <= w.lo) continue;
    if (r >= w.hi) {
      factor_sign = -factor_sign;
      continue;
    }
    return fail(reason, "odd-multiplicity factor inside the interval changes sign");
  }
  if (!(rebuilt == w.original)) return fail(reason, "quotient times factors does not reproduce the polynomial");

  // Sturm sequence: starts with q, q'; each later entry is a negative
  // multiple of the remainder of the two before; the last divides exactly.
  const auto& seq = w.sequence;
  if (seq.empty() || !(seq[0] == w.quotient)) return fail(reason, "sequence does not start with the quotient");
  if (w.quotient.degree() > 0) {
    if (seq.size() < 2 || !(seq[1] == w.quotient.derivative())) return fail(reason, "second entry is not the derivative");
    for (std::size_t k = 2; k < seq.size(); ++k) {
      ExactPoly rem = divide(seq[k - 2], seq[k - 1]).second;
      if (!negative_multiple(seq[k], rem)) return fail(reason, "entry " + std::to_string(k) + " is not -c*rem");
    }
    if (!divide(seq[seq.size() - 2], seq.back()).second.is_zero())
      return fail(reason, "sequence does not terminate with an exact division");
  } else if (seq.size() != 1) {
    return fail(reason, "constant quotient must have a one-element sequence");
  }

  int vlo = variations_at(seq, w.lo), vhi = variations_at(seq, w.hi);
  if (vlo != w.variations_lo || vhi != w.variations_hi) return fail(reason, "recorded variation counts differ");
  if (vlo != vhi) return fail(reason, "quotient has a root inside the interval");

  AlgebraicNumber qlo = eval_exact(w.quotient, w.lo), qhi = eval_exact(w.quotient, w.hi);
  if (!(qlo == w.value_lo) || !(qhi == w.value_hi)) return fail(reason, "recorded endpoint values differ");
  int want = w.claimed_sign * factor_sign;
  if (an_sign(qlo) != want || an_sign(qhi) != want) return fail(reason, "quotient has the wrong sign at an endpoint");
  return true;
}

// Walks the preorder tree recomputing every leaf bound.
bool check_subdivision(const SubdivisionResult& r, std::string* reason) {
  const Box& box = r.box;
  if (!r.positive) {
    if (!r.witness || !r.witness_value) return fail(reason, "negative claim without a witness point");
    const auto& [a, x] = *r.witness;
    if (a < box.alo || a > box.ahi || x < box.xlo || x > box.xhi) return fail(reason, "witness point outside the box");
    AlgebraicNumber v = r.poly.eval(a, x);
    if (!(v == *r.witness_value) || an_sign(v) >= 0) return fail(reason, "witness value is not negative");
    return true;
  }
  std::size_t pos = 0;
  std::string why;
  auto walk = [&](auto&& self, const Box& b) -> bool {
    if (pos >= r.tree.size()) {
      why = "tree ends early";
      return false;
    }
    const SubdivisionNode& node = r.tree[pos++];
    if (node.leaf) {
      AlgebraicNumber lower = r.poly.interval_lower(b.alo, b.ahi, b.xlo, b.xhi);
      if (!(lower == node.lower)) {
        why = "leaf bound differs from recomputation";
        return false;
      }
      if (an_sign(lower) < 0) {
        why = "leaf bound is negative";
        return false;
      }
      return true;
    }
    const Rational am = (b.alo + b.ahi) / 2, xm = (b.xlo + b.xhi) / 2;
    const Box kids[4] = {{b.alo, am, b.xlo, xm}, {am, b.ahi, b.xlo, xm}, {b.alo, am, xm, b.xhi}, {am, b.ahi, xm, b.xhi}};
    for (const auto& k : kids)
      if (!self(self, k)) return false;
    return true;
  };
  if (!walk(walk, box)) return fail(reason, why);
  if (pos != r.tree.size()) return fail(reason, "trailing tree nodes");
  return true;
}

bool check_chain(const ChainWitness& w, std::string* reason) {
  if (w.steps.empty()) return fail(reason, "empty chain");
  for (const auto& s : w.steps) {
    int c = compare(s.lhs, s.rhs);
    bool ok = (s.rel == "<" && c < 0) || (s.rel == "<=" && c <= 0) || (s.rel == "==" && c == 0) ||
              (s.rel == ">=" && c >= 0) || (s.rel == ">" && c > 0);
    if (!ok) return fail(reason, "step '" + s.label + "' does not hold");
  }
  return true;
}

bool check_identity(const IdentityWitness& w, std::string* reason) {
  if (w.lhs_factors.empty() || w.rhs_factors.empty()) return fail(reason, "identity needs both sides");
  std::size_t vars = w.lhs_factors[0].vars();
  MultiPoly l = MultiPoly::constant(vars, Rational(1)), r = MultiPoly::constant(vars, Rational(1));
  for (const auto& f : w.lhs_factors) l = l * f;
  for (const auto& f : w.rhs_factors) r = r * f;
  if (!(l == r)) return fail(reason, "expanded sides differ");
  return true;
}

bool check_box_bound(const BoxBoundWitness& w, std::string* reason) {
  if (w.boxes.empty() || w.boxes.size() != w.enclosures.size()) return fail(reason, "box list malformed");
  for (std::size_t k = 0; k < w.boxes.size(); ++k) {
    const auto& b = w.boxes[k];
    if (b.size() != w.poly.vars()) return fail(reason, "box arity mismatch");
    if (k > 0) {
      if (b[0].lo != w.boxes[k - 1][0].hi) return fail(reason, "pieces are not consecutive");
      for (std::size_t v = 1; v < b.size(); ++v)
        if (b[v].lo != w.boxes[0][v].lo || b[v].hi != w.boxes[0][v].hi)
          return fail(reason, "pieces disagree on a shared range");
    }
    RationalInterval e = interval_eval(w.poly, b);
    if (e.lo != w.enclosures[k].lo || e.hi != w.enclosures[k].hi) return fail(reason, "recorded enclosure differs");
    if (e.hi > w.bound || -e.lo > w.bound) return fail(reason, "enclosure exceeds the bound");
  }
  return true;
}

}  // namespace

bool verify_certificate(const Certificate& c, std::string* reason) {
  return std::visit(
      [&](const auto& w) -> bool {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, SturmWitness>) return check_sturm(w, reason);
        else if constexpr (std::is_same_v<W, SubdivisionResult>) return check_subdivision(w, reason);
        else if constexpr (std::is_same_v<W, ChainWitness>) return check_chain(w, reason);
        else if constexpr (std::is_same_v<W, IdentityWitness>) return check_identity(w, reason);
        else return check_box_bound(w, reason);
      },
      c.witness);
}

Certificate sign_certificate(std::string id, std::string claim, const ExactPoly& p, const Rational& lo,
                             const Rational& hi, int sign, std::vector<std::pair<Rational, unsigned>> factors) {
  SturmWitness w;
  w.original = p;
  w.lo = lo;
  w.hi = hi;
  w.claimed_sign = sign;
  w.factors = std::move(factors);
  ExactPoly q = p;
  for (const auto& [r, m] : w.factors) {
    auto [quot, rem] = divide(q, ExactPoly::linear_root(r).pow(m));
    if (!rem.is_zero())
      throw Error(Errc::VerificationFailed, "(x - " + to_string(r) + ")^" + std::to_string(m) + " does not divide");
    q = quot;
  }
  w.quotient = q;
  w.sequence = sturm_sequence(q);
  w.variations_lo = sign_variations(w.sequence, lo);
  w.variations_hi = sign_variations(w.sequence, hi);
  w.value_lo = eval_exact(q, lo);
  w.value_hi = eval_exact(q, hi);

  Certificate c{std::move(id), std::move(claim), CertMethod::Sturm, std::move(w), false, {}};
  c.verified = verify_certificate(c);
  return c;
}

Certificate subdivision_certificate(std::string id, std::string claim, SubdivisionResult result) {
  Certificate c{std::move(id), std::move(claim), CertMethod::Subdivision, std::move(result), false, {}};
  c.verified = std::get<SubdivisionResult>(c.witness).positive && verify_certificate(c);
  return c;
}

Certificate chain_certificate(std::string id, std::string claim, std::vector<ChainStep> steps) {
  Certificate c{std::move(id), std::move(claim), CertMethod::RationalChain, ChainWitness{std::move(steps)}, false, {}};
  c.verified = verify_certificate(c);
  return c;
}

Certificate identity_certificate(std::string id, std::string claim, IdentityWitness w) {
  Certificate c{std::move(id), std::move(claim), CertMethod::Identity, std::move(w), false, {}};
  c.verified = verify_certificate(c);
  return c;
}

Certificate box_bound_certificate(std::string id, std::string claim, const MultiPoly& poly,
                                  std::vector<std::string> names,
                                  std::vector<std::vector<RationalInterval>> boxes) {
  BoxBoundWitness w;
  w.variable_names = std::move(names);
  w.poly = poly;
  w.boxes = std::move(boxes);
  w.bound = 0;
  for (const auto& b : w.boxes) {
    RationalInterval e = interval_eval(poly, b);
    w.bound = std::max(w.bound, std::max(e.hi, Rational(-e.lo)));
    w.enclosures.push_back(std::move(e));
  }
  Certificate c{std::move(id), std::move(claim), CertMethod::BoxBound, std::move(w), false, {}};
  c.verified = verify_certificate(c);
  return c;
}

}  // namespace commonsys
