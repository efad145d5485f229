#include "commonsys/multipoly.hpp"

#include <algorithm>
#include <sstream>

#include "commonsys/error.hpp"
#include "commonsys/exactpoly.hpp"

namespace commonsys {

MultiPoly MultiPoly::constant(std::size_t vars, const Rational& c) {
  MultiPoly p(vars);
  p.add_term(Exponents(vars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t vars, std::size_t which) {
  MultiPoly p(vars);
  Exponents e(vars, 0);
  e.at(which) = 1;
  p.add_term(e, Rational(1));
  return p;
}

std::size_t MultiPoly::degree_in(std::size_t var) const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max<std::size_t>(d, e[var]);
  return d;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != vars_) throw Error(Errc::InvalidArgument, "exponent arity mismatch");
  if (sgn(c) == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, Rational(c * e[var]));
  }
  return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = constant(vars_, Rational(1));
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t v = 0; v < vars_; ++v) m *= commonsys::pow(point.at(v), e[v]);
    sum += m;
  }
  return sum;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, Rational(-c));
  return *this;
}

MultiPoly operator*(const MultiPoly& x, const MultiPoly& y) {
  if (x.vars_ != y.vars_) throw Error(Errc::InvalidArgument, "variable count mismatch");
  MultiPoly out(x.vars_);
  for (const auto& [ex, cx] : x.terms_)
    for (const auto& [ey, cy] : y.terms_) {
      MultiPoly::Exponents e(ex);
      for (std::size_t v = 0; v < e.size(); ++v) e[v] += ey[v];
      out.add_term(e, Rational(cx * cy));
    }
  return out;
}

MultiPoly operator*(const Rational& c, const MultiPoly& y) {
  MultiPoly out(y.vars_);
  for (const auto& [e, v] : y.terms_) out.add_term(e, Rational(c * v));
  return out;
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << commonsys::to_string(c) << ")";
    for (std::size_t v = 0; v < vars_; ++v)
      if (e[v]) os << "*" << (v < names.size() ? names[v] : "x" + std::to_string(v)) << "^" << e[v];
  }
  return os.str();
}

RationalInterval interval_eval(const MultiPoly& p, const std::vector<RationalInterval>& box) {
  if (box.size() != p.vars()) throw Error(Errc::InvalidArgument, "box arity mismatch");
  RationalInterval acc{Rational(0), Rational(0)};
  for (const auto& [e, c] : p.terms()) {
    Rational lo = 1, hi = 1;
    for (std::size_t v = 0; v < e.size(); ++v) {
      auto [a, b] = interval_pow(box[v].lo, box[v].hi, e[v]);
      Rational cands[4] = {Rational(lo * a), Rational(lo * b), Rational(hi * a), Rational(hi * b)};
      lo = *std::min_element(cands, cands + 4);
      hi = *std::max_element(cands, cands + 4);
    }
    if (sgn(c) >= 0) {
      acc.lo += c * lo;
      acc.hi += c * hi;
    } else {
      acc.lo += c * hi;
      acc.hi += c * lo;
    }
  }
  return acc;
}

}  // namespace commonsys
