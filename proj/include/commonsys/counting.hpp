#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "commonsys/harmonic.hpp"
#include "commonsys/linsys.hpp"
#include "commonsys/rational.hpp"

namespace commonsys {

/// Enumeration cap shared by the brute and Fourier paths.
inline constexpr std::uint64_t kEnumerationCap = 100'000'000;

/// Exact-valued function on F_p^n, same indexing as GroupFunction.
struct ExactFunction {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::vector<Rational> values;

  ExactFunction complement() const;
  Rational mean() const;
  GroupFunction to_double() const;
};

/// Reads each double through its shortest decimal literal.
ExactFunction to_exact(const GroupFunction& f);

/// T(f) = E over y in (F_p^n)^D of prod_i f(psi_i(y)), in exact arithmetic.
/// Throws TooLarge if p^(nD) > kEnumerationCap.
Rational t_brute(const LinearSystem& s, const ExactFunction& f);
Rational t_brute(const LinearSystem& s, const GroupFunction& f);

/// T(f) = sum over lambda in (F_p^n)^m of prod_i f^(sum_r lambda_r M_ri).
/// Throws TooLarge if p^(nm) > kEnumerationCap.
std::complex<double> t_fourier_complex(const LinearSystem& s, const Spectrum& spec);
double t_fourier(const LinearSystem& s, const Spectrum& spec);
double t_fourier(const LinearSystem& s, const GroupFunction& f);

/// Product of t_fourier over the blocks of factor_disjoint, times mean(f) per
/// isolated column.
double t_product(const LinearSystem& s, const GroupFunction& f);

/// G with T(f + e d) - T(f) = (e / p^n) sum_x G(x) d(x) + O(e^2).
GroupFunction t_gradient(const LinearSystem& s, const GroupFunction& f);

enum class PropertyKind { Common, GeometricCommon, Alon, Sidorenko, Prevalence };

struct Property {
  PropertyKind kind = PropertyKind::Common;
  std::optional<std::uint64_t> l;   // Alon
  std::optional<double> alpha;      // Prevalence target mean

  static Property common() { return {PropertyKind::Common, {}, {}}; }
  static Property geometric() { return {PropertyKind::GeometricCommon, {}, {}}; }
  static Property alon(std::uint64_t l) { return {PropertyKind::Alon, l, {}}; }
  static Property sidorenko() { return {PropertyKind::Sidorenko, {}, {}}; }
  static Property prevalence(double alpha) { return {PropertyKind::Prevalence, {}, alpha}; }
};

std::string to_string(PropertyKind kind);
PropertyKind parse_property_kind(std::string_view name);

enum class Method { BruteExact, Fourier };
std::string to_string(Method m);

struct DefectReport {
  std::string system_id;
  Property property;
  std::size_t variables = 0;  // t
  double alpha = 0.0;         // mean of f
  /// Negative certifies a violation at this f. For Alon(l) this is
  /// 2^-l * scaled_value and may underflow; the sign of scaled_value is
  /// authoritative.
  double value = 0.0;
  /// 2^l * value for Alon(l); equal to value otherwise.
  double scaled_value = 0.0;
  double t_f = 0.0;
  double t_1mf = 0.0;
  Method method = Method::Fourier;
  /// Populated on the exact path.
  std::optional<Rational> exact_alpha;
  std::optional<Rational> exact_t_f;
  std::optional<Rational> exact_t_1mf;
  std::optional<Rational> exact_value;
};

/// Applies the defining formula of `property` to (T(f), T(1-f), alpha, t).
/// Returns {value, scaled_value}.
std::pair<double, double> defect_formula(const Property& property, double t_f, double t_1mf,
                                         double alpha, std::size_t t);

/// Throws MeanConstraintViolated (geometric, |mean - 1/2| > 1e-9) and MissingL.
DefectReport defect(const LinearSystem& s, const GroupFunction& f, const Property& property,
                    Method method = Method::Fourier);
DefectReport defect(const LinearSystem& s, const ExactFunction& f, const Property& property);

struct AlonWitness {
  GroupFunction function;
  bool swapped = false;   // built from 1 - f because T(1 - f) < T(f)
  double c = 0.0;         // log sqrt(T(1-f)/T(f)) for the (possibly swapped) input
  std::size_t support = 0;  // |S|, S = { x : f(x) <= 9/10 }
  double added = 0.0;     // value placed on S
};

/// f + g where g = (p^n/|S|) * c/(2l) on S = { x : f(x) <= 9/10 }.
/// Throws MeanConstraintViolated, LTooSmall, DegenerateT.
AlonWitness alon_witness(const GroupFunction& f, const LinearSystem& s, std::uint64_t l);

}  // namespace commonsys
