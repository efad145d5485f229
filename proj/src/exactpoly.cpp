#include "commonsys/exactpoly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "commonsys/error.hpp"

namespace commonsys {

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
  a += o.a;
  b += o.b;
  return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
  a -= o.a;
  b -= o.b;
  return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
  Rational na = a * o.a + 2 * b * o.b;
  Rational nb = a * o.b + b * o.a;
  a = std::move(na);
  b = std::move(nb);
  return *this;
}

AlgebraicNumber& AlgebraicNumber::operator/=(const AlgebraicNumber& o) {
  if (o.is_zero()) throw Error(Errc::InvalidArgument, "division by zero in Q(sqrt2)");
  // x / y = x * conj(y) / N(y); N(y) != 0 since sqrt2 is irrational.
  Rational n = o.norm();
  *this *= o.conjugate();
  a /= n;
  b /= n;
  return *this;
}

int an_sign(const AlgebraicNumber& x) {
  int sa = sgn(x.a), sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the term with the larger square wins.
  int c = cmp(Rational(x.a * x.a), Rational(2 * x.b * x.b));
  return c > 0 ? sa : sb;
}

int compare(const AlgebraicNumber& x, const AlgebraicNumber& y) { return an_sign(x - y); }

Rational lower_bound(const AlgebraicNumber& x, const mpz_class& den) {
  if (sgn(x.b) >= 0) return Rational(x.a + x.b * sqrt_lower(Rational(2), den));
  return Rational(x.a + x.b * sqrt_upper(Rational(2), den));
}

Rational upper_bound(const AlgebraicNumber& x, const mpz_class& den) {
  if (sgn(x.b) >= 0) return Rational(x.a + x.b * sqrt_upper(Rational(2), den));
  return Rational(x.a + x.b * sqrt_lower(Rational(2), den));
}

double to_double(const AlgebraicNumber& x) {
  return to_double(x.a) + to_double(x.b) * 1.4142135623730950488;
}

std::string to_string(const AlgebraicNumber& x) {
  if (sgn(x.b) == 0) return to_string(x.a);
  std::string rad = to_string(x.b) + "*sqrt2";
  if (sgn(x.a) == 0) return rad;
  if (sgn(x.b) < 0) return to_string(x.a) + " - " + to_string(Rational(-x.b)) + "*sqrt2";
  return to_string(x.a) + " + " + rad;
}

AlgebraicNumber parse_algebraic(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(Errc::MalformedDocument, "empty algebraic number");

  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E' && s[i - 1] != '/' &&
        s[i - 1] != '*') {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));

  AlgebraicNumber out;
  for (std::string term : terms) {
    const std::string tag = "sqrt2";
    auto pos = term.find(tag);
    if (pos == std::string::npos) {
      out.a += parse_rational(term);
      continue;
    }
    if (pos + tag.size() != term.size())
      throw Error(Errc::MalformedDocument, "bad algebraic term '" + term + "'");
    std::string coef = term.substr(0, pos);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    Rational c;
    if (coef.empty() || coef == "+") c = 1;
    else if (coef == "-") c = -1;
    else c = parse_rational(coef);
    out.b += c;
  }
  out.a.canonicalize();
  out.b.canonicalize();
  return out;
}

ExactPoly::ExactPoly(std::vector<AlgebraicNumber> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void ExactPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  if (coeffs_.size() > kMaxPolyDegree + 1)
    throw Error(Errc::InvalidArgument, "polynomial degree exceeds " + std::to_string(kMaxPolyDegree));
}

ExactPoly ExactPoly::constant(const AlgebraicNumber& c) { return ExactPoly({c}); }
ExactPoly ExactPoly::x() { return ExactPoly({AlgebraicNumber(0), AlgebraicNumber(1)}); }
ExactPoly ExactPoly::linear_root(const Rational& r) { return ExactPoly({AlgebraicNumber(Rational(-r)), AlgebraicNumber(1)}); }

ExactPoly ExactPoly::derivative() const {
  std::vector<AlgebraicNumber> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * AlgebraicNumber(static_cast<long>(k)));
  return ExactPoly(std::move(d));
}

ExactPoly ExactPoly::scaled(const AlgebraicNumber& c) const {
  std::vector<AlgebraicNumber> out(coeffs_);
  for (auto& v : out) v *= c;
  return ExactPoly(std::move(out));
}

ExactPoly ExactPoly::pow(unsigned e) const {
  ExactPoly r = constant(AlgebraicNumber(1));
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

ExactPoly ExactPoly::substitute_affine(const Rational& a, const Rational& b) const {
  ExactPoly inner({AlgebraicNumber(b), AlgebraicNumber(a)});
  ExactPoly r;
  for (std::size_t k = coeffs_.size(); k-- > 0;) r = r * inner + constant(coeffs_[k]);
  return r;
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  normalize();
  return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  normalize();
  return *this;
}

ExactPoly operator*(const ExactPoly& x, const ExactPoly& y) {
  if (x.is_zero() || y.is_zero()) return {};
  std::vector<AlgebraicNumber> out(x.coeffs_.size() + y.coeffs_.size() - 1);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < y.coeffs_.size(); ++j) out[i + j] += x.coeffs_[i] * y.coeffs_[j];
  return ExactPoly(std::move(out));
}

std::pair<ExactPoly, ExactPoly> divide(const ExactPoly& num, const ExactPoly& den) {
  if (den.is_zero()) throw Error(Errc::ZeroPolynomial, "division by the zero polynomial");
  std::vector<AlgebraicNumber> rem = num.coeffs();
  const int dd = den.degree();
  if (num.degree() < dd) return {ExactPoly(), num};
  std::vector<AlgebraicNumber> quot(num.degree() - dd + 1);
  const AlgebraicNumber& lc = den.leading();
  for (int k = num.degree(); k >= dd; --k) {
    if (rem[k].is_zero()) continue;
    AlgebraicNumber f = rem[k] / lc;
    quot[k - dd] = f;
    for (int i = 0; i <= dd; ++i) rem[k - dd + i] -= f * den.coeffs()[i];
  }
  rem.resize(dd);
  return {ExactPoly(std::move(quot)), ExactPoly(std::move(rem))};
}

ExactPoly parse_poly(const std::vector<std::string>& coeffs) {
  std::vector<AlgebraicNumber> c;
  for (const auto& s : coeffs) c.push_back(parse_algebraic(s));
  return ExactPoly(std::move(c));
}

std::vector<std::string> poly_to_strings(const ExactPoly& p) {
  std::vector<std::string> out;
  for (const auto& c : p.coeffs()) out.push_back(to_string(c));
  return out;
}

AlgebraicNumber eval_exact(const ExactPoly& p, const Rational& x) {
  AlgebraicNumber r;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    r.a *= x;
    r.b *= x;
    r += p.coeffs()[k];
  }
  return r;
}

AlgebraicNumber eval_exact(const ExactPoly& p, const AlgebraicNumber& x) {
  AlgebraicNumber r;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) r = r * x + p.coeffs()[k];
  return r;
}

namespace {

AlgebraicNumber abs_value(const AlgebraicNumber& x) { return an_sign(x) < 0 ? -x : x; }

}  // namespace

std::vector<ExactPoly> sturm_sequence(const ExactPoly& p) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "Sturm sequence of the zero polynomial");
  std::vector<ExactPoly> seq{p};
  ExactPoly d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    ExactPoly r = divide(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    // Dividing by |lc| keeps signs and keeps coefficients small.
    r = (-r).scaled(AlgebraicNumber(1) / abs_value(r.leading()));
    seq.push_back(std::move(r));
  }
  return seq;
}

int sign_variations(const std::vector<ExactPoly>& seq, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& q : seq) {
    int s = an_sign(eval_exact(q, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int count_roots_open(const ExactPoly& p, const Rational& lo, const Rational& hi) {
  auto seq = sturm_sequence(p);
  return sign_variations(seq, lo) - sign_variations(seq, hi);
}

std::string to_string(SignStatus s) {
  switch (s) {
    case SignStatus::StrictlyPositive: return "strictly_positive";
    case SignStatus::StrictlyNegative: return "strictly_negative";
    case SignStatus::HasRoot: return "has_root";
    case SignStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

SignResult sturm_sign_on_interval(const ExactPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "sign of the zero polynomial");
  if (!(lo < hi)) throw Error(Errc::InvalidArgument, "empty interval");
  SignResult out;
  SturmData& d = out.data;
  d.poly = p;
  d.lo = lo;
  d.hi = hi;
  d.sequence = sturm_sequence(p);
  d.value_lo = eval_exact(p, lo);
  d.value_hi = eval_exact(p, hi);
  d.variations_lo = sign_variations(d.sequence, lo);
  d.variations_hi = sign_variations(d.sequence, hi);
  // With an endpoint root the variation count at that endpoint still counts
  // roots in (lo, hi]; the endpoint itself already decides HasRoot.
  out.interior_roots = d.variations_lo - d.variations_hi;
  int slo = an_sign(d.value_lo), shi = an_sign(d.value_hi);
  if (slo == 0 || shi == 0 || out.interior_roots > 0) {
    out.status = SignStatus::HasRoot;
    if (shi == 0) out.interior_roots -= 1;
  } else {
    out.status = slo > 0 ? SignStatus::StrictlyPositive : SignStatus::StrictlyNegative;
  }
  return out;
}

RootBracket isolate_positive_root(const ExactPoly& p, const Rational& lo, const Rational& hi,
                                  const Rational& precision) {
  if (sgn(precision) <= 0) throw Error(Errc::InvalidArgument, "precision must be positive");
  SignResult sr = sturm_sign_on_interval(p, lo, hi);
  int slo = an_sign(sr.data.value_lo), shi = an_sign(sr.data.value_hi);
  int total = sr.interior_roots + (slo == 0) + (shi == 0);
  if (total != 1)
    throw Error(Errc::NotExactlyOneRoot,
                "found " + std::to_string(total) + " roots in [" + to_string(lo) + ", " + to_string(hi) + "]");
  RootBracket out{lo, hi, sr.data};
  if (slo == 0) {
    out.hi = lo;
    return out;
  }
  if (shi == 0) {
    out.lo = hi;
    return out;
  }
  const auto& seq = sr.data.sequence;
  int vlo = sr.data.variations_lo;
  while (out.hi - out.lo > precision) {
    Rational mid = (out.lo + out.hi) / 2;
    int smid = an_sign(eval_exact(p, mid));
    if (smid == 0) {
      out.lo = out.hi = mid;
      break;
    }
    int vmid = sign_variations(seq, mid);
    if (vlo - vmid == 1) {
      out.hi = mid;
    } else {
      out.lo = mid;
      vlo = vmid;
    }
  }
  return out;
}

BivariatePoly::BivariatePoly(std::vector<Term> terms) {
  for (auto& t : terms)
    if (!t.c.is_zero()) terms_.push_back(std::move(t));
}

AlgebraicNumber BivariatePoly::eval(const Rational& alpha, const Rational& x) const {
  AlgebraicNumber r;
  for (const auto& t : terms_) {
    Rational m = pow(alpha, t.i) * pow(x, t.j);
    r += t.c * AlgebraicNumber(m);
  }
  return r;
}

std::pair<Rational, Rational> interval_pow(const Rational& lo, const Rational& hi, unsigned k) {
  if (k == 0) return {Rational(1), Rational(1)};
  Rational a = pow(lo, k), b = pow(hi, k);
  if (k % 2 == 0 && sgn(lo) < 0 && sgn(hi) > 0) return {Rational(0), std::max(a, b)};
  return {std::min(a, b), std::max(a, b)};
}

AlgebraicNumber BivariatePoly::interval_lower(const Rational& alo, const Rational& ahi, const Rational& xlo,
                                              const Rational& xhi) const {
  AlgebraicNumber r;
  for (const auto& t : terms_) {
    auto [p0, p1] = interval_pow(alo, ahi, t.i);
    auto [q0, q1] = interval_pow(xlo, xhi, t.j);
    Rational prods[4] = {Rational(p0 * q0), Rational(p0 * q1), Rational(p1 * q0), Rational(p1 * q1)};
    Rational mlo = *std::min_element(prods, prods + 4), mhi = *std::max_element(prods, prods + 4);
    r += t.c * AlgebraicNumber(an_sign(t.c) >= 0 ? mlo : mhi);
  }
  return r;
}

std::string BivariatePoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << commonsys::to_string(t.c) << ")";
    if (t.i) os << "*a^" << t.i;
    if (t.j) os << "*x^" << t.j;
  }
  return first ? "0" : os.str();
}

SubdivisionResult subdivision_positive_on_box(const BivariatePoly& f, const Box& box, unsigned max_depth) {
  if (max_depth > 40) throw Error(Errc::InvalidArgument, "max_depth must be <= 40");
  if (box.ahi < box.alo || box.xhi < box.xlo) throw Error(Errc::InvalidArgument, "empty box");
  SubdivisionResult out;
  out.poly = f;
  out.box = box;

  // Exact probes at corners and centre; returns true when a negative point
  // is found.
  auto probe = [&](const Box& b) {
    const Rational am = (b.alo + b.ahi) / 2, xm = (b.xlo + b.xhi) / 2;
    const std::pair<Rational, Rational> pts[5] = {
        {b.alo, b.xlo}, {b.ahi, b.xlo}, {b.alo, b.xhi}, {b.ahi, b.xhi}, {am, xm}};
    for (const auto& [a, x] : pts) {
      AlgebraicNumber v = f.eval(a, x);
      if (an_sign(v) < 0) {
        out.witness = std::make_pair(a, x);
        out.witness_value = v;
        return true;
      }
    }
    return false;
  };

  std::function<bool(const Box&, unsigned)> walk = [&](const Box& b, unsigned depth) -> bool {
    out.depth_reached = std::max(out.depth_reached, depth);
    AlgebraicNumber lower = f.interval_lower(b.alo, b.ahi, b.xlo, b.xhi);
    if (an_sign(lower) >= 0) {
      out.tree.push_back({true, lower});
      ++out.leaves;
      return true;
    }
    if (probe(b)) return false;
    if (depth == max_depth)
      throw Error(Errc::DepthExhausted, "subdivision depth " + std::to_string(max_depth) + " exhausted");
    out.tree.push_back({false, {}});
    const Rational am = (b.alo + b.ahi) / 2, xm = (b.xlo + b.xhi) / 2;
    const Box kids[4] = {{b.alo, am, b.xlo, xm}, {am, b.ahi, b.xlo, xm}, {b.alo, am, xm, b.xhi}, {am, b.ahi, xm, b.xhi}};
    for (const auto& k : kids)
      if (!walk(k, depth + 1)) return false;
    return true;
  };

  out.positive = walk(box, 0);
  if (!out.positive) {
    out.tree.clear();
    out.leaves = 0;
  }
  return out;
}

}  // namespace commonsys
