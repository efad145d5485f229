#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "commonsys/rational.hpp"

namespace commonsys {

/// Sparse polynomial with rational coefficients in a fixed number of
/// variables. Zero coefficients are never stored.
class MultiPoly {
 public:
  using Exponents = std::vector<unsigned>;

  explicit MultiPoly(std::size_t vars = 0) : vars_(vars) {}
  static MultiPoly constant(std::size_t vars, const Rational& c);
  static MultiPoly variable(std::size_t vars, std::size_t which);

  std::size_t vars() const { return vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree_in(std::size_t var) const;

  void add_term(const Exponents& e, const Rational& c);
  MultiPoly derivative(std::size_t var) const;
  MultiPoly pow(unsigned e) const;
  Rational eval(const std::vector<Rational>& point) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly x, const MultiPoly& y) { return x += y; }
  friend MultiPoly operator-(MultiPoly x, const MultiPoly& y) { return x -= y; }
  friend MultiPoly operator*(const MultiPoly& x, const MultiPoly& y);
  friend MultiPoly operator*(const Rational& c, const MultiPoly& y);
  friend bool operator==(const MultiPoly& x, const MultiPoly& y) {
    return x.vars_ == y.vars_ && x.terms_ == y.terms_;
  }

  /// Sum of c * x^e, variables named by `names`.
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::size_t vars_;
  std::map<Exponents, Rational> terms_;
};

/// Certified enclosure of a polynomial over a box, from per-monomial interval
/// products summed term by term.
struct RationalInterval {
  Rational lo;
  Rational hi;
};
RationalInterval interval_eval(const MultiPoly& p, const std::vector<RationalInterval>& box);

}  // namespace commonsys
