#include "commonsys/harmonic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

#include <nlohmann/json.hpp>

#include "commonsys/error.hpp"
#include "commonsys/linsys.hpp"

namespace commonsys {

using json = nlohmann::json;

FpnSpace::FpnSpace(std::uint32_t p, std::uint32_t n) : p_(p), n_(n), size_(1) {
  if (!is_supported_modulus(p)) throw Error(Errc::NotOddPrime, "p = " + std::to_string(p));
  if (n == 0) throw Error(Errc::InvalidArgument, "dimension n must be >= 1");
  for (std::uint32_t i = 0; i < n; ++i) {
    size_ *= p;
    if (size_ > kMaxGroupSize) throw Error(Errc::TooLarge, "p^n exceeds 2^24");
  }
}

std::vector<std::uint32_t> FpnSpace::digits(std::size_t index) const {
  std::vector<std::uint32_t> d(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    d[i] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  return d;
}

std::size_t FpnSpace::index(std::span<const std::uint32_t> digits) const {
  std::size_t idx = 0;
  for (std::size_t i = digits.size(); i-- > 0;) idx = idx * p_ + digits[i] % p_;
  return idx;
}

std::size_t FpnSpace::negate(std::size_t index) const {
  std::size_t out = 0, w = 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::size_t d = index % p_;
    index /= p_;
    out += ((p_ - d) % p_) * w;
    w *= p_;
  }
  return out;
}

std::size_t FpnSpace::add(std::size_t a, std::size_t b) const {
  std::size_t out = 0, w = 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    out += ((a % p_ + b % p_) % p_) * w;
    a /= p_;
    b /= p_;
    w *= p_;
  }
  return out;
}

std::size_t FpnSpace::scale(std::uint32_t c, std::size_t index) const {
  std::size_t out = 0, w = 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    out += (std::size_t(c % p_) * (index % p_) % p_) * w;
    index /= p_;
    w *= p_;
  }
  return out;
}

std::uint32_t FpnSpace::dot(std::size_t h, std::size_t x) const {
  std::size_t acc = 0;
  for (std::uint32_t i = 0; i < n_; ++i) {
    acc += (h % p_) * (x % p_);
    h /= p_;
    x /= p_;
  }
  return static_cast<std::uint32_t>(acc % p_);
}

GroupFunction::GroupFunction(std::uint32_t p, std::uint32_t n, std::vector<double> values)
    : p_(p), n_(n), values_(std::move(values)) {
  FpnSpace space(p, n);
  if (values_.size() != space.size())
    throw Error(Errc::MalformedDocument, "expected p^n = " + std::to_string(space.size()) +
                                             " values, got " + std::to_string(values_.size()));
}

GroupFunction GroupFunction::constant(std::uint32_t p, std::uint32_t n, double value) {
  FpnSpace space(p, n);
  return GroupFunction(p, n, std::vector<double>(space.size(), value));
}

GroupFunction GroupFunction::coset_indicator(std::uint32_t p, std::uint32_t n,
                                             const std::vector<std::uint32_t>& a, std::uint32_t b) {
  FpnSpace space(p, n);
  if (a.size() != n) throw Error(Errc::InvalidArgument, "coset normal has wrong dimension");
  std::size_t h = space.index(a);
  std::vector<double> v(space.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = space.dot(h, x) == b % p ? 1.0 : 0.0;
  return GroupFunction(p, n, std::move(v));
}

GroupFunction GroupFunction::complement() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return 1.0 - x; });
  return GroupFunction(p_, n_, std::move(v));
}

GroupFunction GroupFunction::shifted(double c) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [c](double x) { return x - c; });
  return GroupFunction(p_, n_, std::move(v));
}

bool GroupFunction::in_unit_box(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](double x) { return x >= -tol && x <= 1.0 + tol; });
}

Spectrum::Spectrum(std::uint32_t p, std::uint32_t n, std::vector<std::complex<double>> coeffs)
    : p_(p), n_(n), coeffs_(std::move(coeffs)) {
  FpnSpace space(p, n);
  if (coeffs_.size() != space.size()) throw Error(Errc::InvalidArgument, "spectrum size mismatch");
}

double mean(const GroupFunction& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

namespace {

// table[k] = e_p(sign * k) for k in 0..p-1, from one cosine/sine per entry.
std::vector<std::complex<double>> root_table(std::uint32_t p, int sign) {
  std::vector<std::complex<double>> w(p);
  for (std::uint32_t k = 0; k < p; ++k) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
    w[k] = {std::cos(angle), sign * std::sin(angle)};
  }
  return w;
}

// In-place length-p transform along every axis; multiplies by `scale` per axis.
void transform(std::vector<std::complex<double>>& a, std::uint32_t p, std::uint32_t n, int sign,
               double scale) {
  auto w = root_table(p, sign);
  std::vector<std::complex<double>> in(p), out(p);
  std::size_t stride = 1;
  for (std::uint32_t axis = 0; axis < n; ++axis) {
    std::size_t block = stride * p;
    for (std::size_t base = 0; base < a.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::uint32_t j = 0; j < p; ++j) in[j] = a[base + off + j * stride];
        for (std::uint32_t h = 0; h < p; ++h) {
          std::complex<double> acc = 0.0;
          for (std::uint32_t j = 0; j < p; ++j) acc += in[j] * w[(std::size_t(h) * j) % p];
          out[h] = acc * scale;
        }
        for (std::uint32_t h = 0; h < p; ++h) a[base + off + h * stride] = out[h];
      }
    }
    stride = block;
  }
}

}  // namespace

Spectrum dft(const GroupFunction& f) {
  std::vector<std::complex<double>> a(f.values().begin(), f.values().end());
  transform(a, f.p(), f.n(), -1, 1.0 / static_cast<double>(f.p()));
  return Spectrum(f.p(), f.n(), std::move(a));
}

std::vector<std::complex<double>> idft_complex(const Spectrum& s) {
  std::vector<std::complex<double>> a(s.coeffs().begin(), s.coeffs().end());
  transform(a, s.p(), s.n(), +1, 1.0);
  return a;
}

GroupFunction idft(const Spectrum& s) {
  auto a = idft_complex(s);
  std::vector<double> v(a.size());
  std::transform(a.begin(), a.end(), v.begin(), [](const std::complex<double>& z) { return z.real(); });
  return GroupFunction(s.p(), s.n(), std::move(v));
}

double spectral_sup(const GroupFunction& g) {
  double mu = mean(g);
  if (std::abs(mu) > 1e-9)
    throw Error(Errc::NotCentered, "mean is " + std::to_string(mu));
  Spectrum s = dft(g);
  double best = 0.0;
  for (const auto& z : s.coeffs()) best = std::max(best, std::abs(z));
  return best;
}

GroupFunction parse_function_text(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("n") || !doc.contains("values"))
    throw Error(Errc::MalformedDocument, "expected fields \"p\", \"n\", \"values\"");
  if (!doc["p"].is_number_integer() || !doc["n"].is_number_integer() || !doc["values"].is_array())
    throw Error(Errc::MalformedDocument, "bad field types in function document");
  std::vector<double> values;
  for (const auto& v : doc["values"]) {
    if (!v.is_number()) throw Error(Errc::MalformedDocument, "values must be numbers");
    values.push_back(v.get<double>());
  }
  auto p = doc["p"].get<std::int64_t>();
  auto n = doc["n"].get<std::int64_t>();
  if (!is_supported_modulus(p)) throw Error(Errc::NotOddPrime, "p = " + std::to_string(p));
  if (n < 1 || n > 24) throw Error(Errc::MalformedDocument, "n out of range");
  return GroupFunction(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n), std::move(values));
}

std::string function_to_text(const GroupFunction& f) {
  json doc = {{"p", f.p()}, {"n", f.n()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}};
  return doc.dump();
}

namespace {

constexpr char kMagic[4] = {'G', 'F', 'P', 'N'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string function_to_binary(const GroupFunction& f) {
  std::string out(kMagic, 4);
  put_u32(out, f.p());
  put_u32(out, f.n());
  put_u32(out, 0);
  for (double v : f.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  return out;
}

GroupFunction parse_function_binary(std::string_view bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(Errc::MalformedDocument, "missing GFPN header");
  std::uint32_t p = get_u32(bytes, 4), n = get_u32(bytes, 8);
  if (!is_supported_modulus(p)) throw Error(Errc::NotOddPrime, "p = " + std::to_string(p));
  FpnSpace space(p, n);
  if (bytes.size() != 16 + 8 * space.size())
    throw Error(Errc::MalformedDocument, "GFPN payload length does not match p^n");
  std::vector<double> values(space.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= std::uint64_t(static_cast<unsigned char>(bytes[16 + 8 * k + i])) << (8 * i);
    values[k] = std::bit_cast<double>(bits);
  }
  return GroupFunction(p, n, std::move(values));
}

GroupFunction parse_function(std::string_view bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return parse_function_binary(bytes);
  return parse_function_text(bytes);
}

}  // namespace commonsys
