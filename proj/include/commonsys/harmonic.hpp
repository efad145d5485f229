#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace commonsys {

/// Dense storage cap: p^n <= 2^24.
inline constexpr std::uint64_t kMaxGroupSize = std::uint64_t(1) << 24;

/// Index arithmetic on F_p^n with the little-endian mixed-radix encoding
/// index(x) = sum_i x_i p^(i-1).
class FpnSpace {
 public:
  FpnSpace(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::size_t size() const { return size_; }

  std::vector<std::uint32_t> digits(std::size_t index) const;
  std::size_t index(std::span<const std::uint32_t> digits) const;
  std::size_t negate(std::size_t index) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t scale(std::uint32_t c, std::size_t index) const;
  /// h . x mod p
  std::uint32_t dot(std::size_t h, std::size_t x) const;

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::size_t size_;
};

/// A real-valued function on F_p^n stored densely in index order.
class GroupFunction {
 public:
  GroupFunction(std::uint32_t p, std::uint32_t n, std::vector<double> values);
  static GroupFunction constant(std::uint32_t p, std::uint32_t n, double value);
  /// Indicator of the coset { x : a . x = b }.
  static GroupFunction coset_indicator(std::uint32_t p, std::uint32_t n,
                                       const std::vector<std::uint32_t>& a, std::uint32_t b);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  FpnSpace space() const { return FpnSpace(p_, n_); }

  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// 1 - f
  GroupFunction complement() const;
  /// f - c
  GroupFunction shifted(double c) const;
  bool in_unit_box(double tol = 0.0) const;

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::vector<double> values_;
};

/// Fourier coefficients f^(h), same indexing as GroupFunction.
class Spectrum {
 public:
  Spectrum(std::uint32_t p, std::uint32_t n, std::vector<std::complex<double>> coeffs);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::complex<double>& operator[](std::size_t h) const { return coeffs_[h]; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::vector<std::complex<double>> coeffs_;
};

double mean(const GroupFunction& f);

/// f^(h) = E_x f(x) e_p(-h.x): n rounds of length-p transforms.
Spectrum dft(const GroupFunction& f);

/// f(x) = sum_h f^(h) e_p(h.x); the real part of the inverse transform.
GroupFunction idft(const Spectrum& s);

/// Complex inverse transform, used where the spectrum is not conjugate
/// symmetric.
std::vector<std::complex<double>> idft_complex(const Spectrum& s);

/// sup_h |g^(h)| including h = 0. Throws NotCentered if |mean(g)| > 1e-9.
double spectral_sup(const GroupFunction& g);

/// Function files: structured text {"p":..,"n":..,"values":[..]} or the
/// binary GFPN layout (16-byte little-endian header then p^n doubles).
GroupFunction parse_function_text(std::string_view document);
std::string function_to_text(const GroupFunction& f);
GroupFunction parse_function_binary(std::string_view bytes);
std::string function_to_binary(const GroupFunction& f);
/// Dispatches on the "GFPN" magic.
GroupFunction parse_function(std::string_view bytes);

}  // namespace commonsys
