#include "commonsys/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commonsys/error.hpp"
#include "commonsys/parallel.hpp"
#include "odometer.hpp"

namespace commonsys {

using detail::FormOdometer;

ExactFunction ExactFunction::complement() const {
  ExactFunction out{p, n, values};
  for (auto& v : out.values) v = 1 - v;
  return out;
}

Rational ExactFunction::mean() const {
  Rational sum = 0;
  for (const auto& v : values) sum += v;
  return sum / static_cast<unsigned long>(values.size());
}

GroupFunction ExactFunction::to_double() const {
  std::vector<double> v(values.size());
  std::transform(values.begin(), values.end(), v.begin(), [](const Rational& q) { return q.get_d(); });
  return GroupFunction(p, n, std::move(v));
}

ExactFunction to_exact(const GroupFunction& f) {
  ExactFunction out{f.p(), f.n(), {}};
  out.values.reserve(f.size());
  for (double v : f.values()) out.values.push_back(rational_from_double(v));
  return out;
}

namespace {

std::uint64_t chunk_count(std::uint64_t total) { return total >= (1u << 16) ? 64 : 1; }

mpz_class from_int128(__int128 v) {
  bool negative = v < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  mpz_class out = (hi << 64) + lo;
  return negative ? mpz_class(-out) : out;
}

std::vector<std::uint32_t> kernel_forms(const LinearSystem& s) {
  std::size_t t = s.variables(), d = s.parameters();
  std::vector<std::uint32_t> forms(t * d);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t k = 0; k < d; ++k) forms[i * d + k] = s.kernel_coeff(i, k);
  return forms;
}

std::vector<std::uint32_t> row_space_forms(const LinearSystem& s) {
  std::size_t t = s.variables(), m = s.equations();
  std::vector<std::uint32_t> forms(t * m);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t r = 0; r < m; ++r) forms[i * m + r] = s.coeff(r, i);
  return forms;
}

void check_compatible(const LinearSystem& s, std::uint32_t p) {
  if (s.modulus() != p)
    throw Error(Errc::InvalidArgument, "function modulus " + std::to_string(p) +
                                           " does not match system modulus " + std::to_string(s.modulus()));
}

}  // namespace

Rational t_brute(const LinearSystem& s, const ExactFunction& f) {
  check_compatible(s, f.p);
  const std::uint32_t p = f.p, n = f.n;
  const std::size_t t = s.variables(), d = s.parameters();
  const std::uint64_t total = detail::bounded_power(p, std::uint64_t(n) * d, kEnumerationCap);
  if (total == 0) throw Error(Errc::TooLarge, "p^(nD) exceeds 10^8");

  mpz_class common = 1;
  for (const auto& v : f.values) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_den_mpz_t());
  std::vector<mpz_class> numer(f.values.size());
  std::size_t max_bits = 0;
  for (std::size_t x = 0; x < numer.size(); ++x) {
    numer[x] = f.values[x].get_num() * (common / f.values[x].get_den());
    max_bits = std::max(max_bits, mpz_sizeinbase(numer[x].get_mpz_t(), 2));
  }
  const auto forms = kernel_forms(s);

  std::function<mpz_class(std::uint64_t, std::uint64_t)> work;
  if (max_bits * t <= 124) {
    std::vector<std::int64_t> small(numer.size());
    for (std::size_t x = 0; x < numer.size(); ++x) small[x] = numer[x].get_si();
    const std::size_t headroom = 126 - max_bits * t;
    const std::uint64_t flush_every = std::uint64_t(1) << std::min<std::size_t>(headroom, 62);
    work = [&, small, flush_every](std::uint64_t begin, std::uint64_t end) {
      FormOdometer od(p, n, t, d, forms);
      od.seek(begin);
      mpz_class sum = 0;
      __int128 acc = 0;
      std::uint64_t pending = 0;
      for (std::uint64_t u = begin; u < end; ++u, od.next()) {
        const auto& idx = od.indices();
        __int128 prod = 1;
        for (std::size_t i = 0; i < t && prod != 0; ++i) prod *= small[idx[i]];
        acc += prod;
        if (++pending == flush_every) {
          sum += from_int128(acc);
          acc = 0;
          pending = 0;
        }
      }
      sum += from_int128(acc);
      return sum;
    };
  } else {
    work = [&](std::uint64_t begin, std::uint64_t end) {
      FormOdometer od(p, n, t, d, forms);
      od.seek(begin);
      mpz_class sum = 0, prod;
      for (std::uint64_t u = begin; u < end; ++u, od.next()) {
        const auto& idx = od.indices();
        prod = 1;
        for (std::size_t i = 0; i < t && prod != 0; ++i) prod *= numer[idx[i]];
        sum += prod;
      }
      return sum;
    };
  }
  auto parts = chunked_map<mpz_class>(total, chunk_count(total), work);
  mpz_class sum = 0;
  for (const auto& part : parts) sum += part;

  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), common.get_mpz_t(), t);
  den *= static_cast<unsigned long>(total);
  Rational result(sum, den);
  result.canonicalize();
  return result;
}

Rational t_brute(const LinearSystem& s, const GroupFunction& f) { return t_brute(s, to_exact(f)); }

std::complex<double> t_fourier_complex(const LinearSystem& s, const Spectrum& spec) {
  check_compatible(s, spec.p());
  const std::uint32_t p = spec.p(), n = spec.n();
  const std::size_t t = s.variables(), m = s.equations();
  const std::uint64_t total = detail::bounded_power(p, std::uint64_t(n) * m, kEnumerationCap);
  if (total == 0) throw Error(Errc::TooLarge, "p^(nm) exceeds 10^8");
  const auto forms = row_space_forms(s);
  const auto coeffs = spec.coeffs();

  auto parts = chunked_map<std::complex<double>>(
      total, chunk_count(total), [&](std::uint64_t begin, std::uint64_t end) {
        FormOdometer od(p, n, t, m, forms);
        od.seek(begin);
        std::complex<double> sum = 0.0;
        for (std::uint64_t u = begin; u < end; ++u, od.next()) {
          const auto& idx = od.indices();
          std::complex<double> prod = 1.0;
          for (std::size_t i = 0; i < t; ++i) prod *= coeffs[idx[i]];
          sum += prod;
        }
        return sum;
      });
  std::complex<double> sum = 0.0;
  for (const auto& part : parts) sum += part;
  return sum;
}

double t_fourier(const LinearSystem& s, const Spectrum& spec) { return t_fourier_complex(s, spec).real(); }

double t_fourier(const LinearSystem& s, const GroupFunction& f) { return t_fourier(s, dft(f)); }

double t_product(const LinearSystem& s, const GroupFunction& f) {
  check_compatible(s, f.p());
  Factorization fac = factor_disjoint(s);
  Spectrum spec = dft(f);
  double result = 1.0;
  for (const auto& block : fac.blocks) result *= t_fourier(block, spec);
  if (!fac.isolated_columns.empty())
    result *= std::pow(mean(f), static_cast<double>(fac.isolated_columns.size()));
  return result;
}

GroupFunction t_gradient(const LinearSystem& s, const GroupFunction& f) {
  check_compatible(s, f.p());
  const std::uint32_t p = f.p(), n = f.n();
  const std::size_t t = s.variables(), m = s.equations();
  const std::uint64_t total = detail::bounded_power(p, std::uint64_t(n) * m, kEnumerationCap);
  if (total == 0) throw Error(Errc::TooLarge, "p^(nm) exceeds 10^8");
  const auto forms = row_space_forms(s);
  const Spectrum spec = dft(f);
  const auto coeffs = spec.coeffs();
  const std::size_t size = f.size();

  using Acc = std::vector<std::complex<double>>;
  const std::uint64_t chunks = total >= (1u << 16) ? 16 : 1;
  auto parts = chunked_map<Acc>(total, chunks, [&](std::uint64_t begin, std::uint64_t end) {
    Acc acc(size, 0.0);
    std::vector<std::complex<double>> prefix(t + 1), suffix(t + 1);
    FormOdometer od(p, n, t, m, forms);
    od.seek(begin);
    for (std::uint64_t u = begin; u < end; ++u, od.next()) {
      const auto& idx = od.indices();
      prefix[0] = 1.0;
      for (std::size_t i = 0; i < t; ++i) prefix[i + 1] = prefix[i] * coeffs[idx[i]];
      suffix[t] = 1.0;
      for (std::size_t i = t; i-- > 0;) suffix[i] = suffix[i + 1] * coeffs[idx[i]];
      for (std::size_t i = 0; i < t; ++i) acc[idx[i]] += prefix[i] * suffix[i + 1];
    }
    return acc;
  });
  Acc total_acc(size, 0.0);
  for (const auto& part : parts)
    for (std::size_t h = 0; h < size; ++h) total_acc[h] += part[h];

  // G(x) = sum_h A(h) e_p(-h.x) = (inverse transform of A)(-x).
  auto inv = idft_complex(Spectrum(p, n, std::move(total_acc)));
  FpnSpace space(p, n);
  std::vector<double> g(size);
  for (std::size_t x = 0; x < size; ++x) g[x] = inv[space.negate(x)].real();
  return GroupFunction(p, n, std::move(g));
}

std::string to_string(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Common: return "common";
    case PropertyKind::GeometricCommon: return "geometric";
    case PropertyKind::Alon: return "alon";
    case PropertyKind::Sidorenko: return "sidorenko";
    case PropertyKind::Prevalence: return "prevalence";
  }
  return "unknown";
}

PropertyKind parse_property_kind(std::string_view name) {
  if (name == "common") return PropertyKind::Common;
  if (name == "geometric") return PropertyKind::GeometricCommon;
  if (name == "alon") return PropertyKind::Alon;
  if (name == "sidorenko") return PropertyKind::Sidorenko;
  if (name == "prevalence") return PropertyKind::Prevalence;
  throw Error(Errc::InvalidArgument, "unknown property '" + std::string(name) + "'");
}

std::string to_string(Method m) { return m == Method::BruteExact ? "brute" : "fourier"; }

namespace {

// 2^l (alpha^l a + (1-alpha)^l b) - 2^(1-t), evaluated in log space so that
// large l neither overflows nor underflows before the signs are combined.
double scaled_alon(double alpha, std::uint64_t l, double a, double b, std::size_t t) {
  struct Term {
    long double log_mag;
    int sign;
  };
  std::vector<Term> terms;
  auto push = [&](long double base, long double weight) {
    if (weight == 0.0L) return;
    if (l > 0 && base == 0.0L) return;
    long double lm = std::log(std::fabs(weight)) + (l > 0 ? static_cast<long double>(l) * std::log(base) : 0.0L);
    terms.push_back({lm, weight > 0 ? 1 : -1});
  };
  push(2.0L * alpha, a);
  push(2.0L * (1.0L - alpha), b);
  terms.push_back({(1.0L - static_cast<long double>(t)) * std::log(2.0L), -1});
  long double top = -std::numeric_limits<long double>::infinity();
  for (const auto& term : terms) top = std::max(top, term.log_mag);
  long double s = 0.0L;
  for (const auto& term : terms) s += term.sign * std::exp(term.log_mag - top);
  long double result = s * std::exp(top);
  return static_cast<double>(result);
}

void require_l(const Property& property) {
  if (property.kind == PropertyKind::Alon && !property.l)
    throw Error(Errc::MissingL, "Alon property needs l");
}

void check_geometric_mean(const Property& property, double alpha) {
  if (property.kind == PropertyKind::GeometricCommon && std::abs(alpha - 0.5) > 1e-9)
    throw Error(Errc::MeanConstraintViolated, "geometric commonness needs mean 1/2, got " + std::to_string(alpha));
}

}  // namespace

std::pair<double, double> defect_formula(const Property& property, double t_f, double t_1mf, double alpha,
                                         std::size_t t) {
  const double td = static_cast<double>(t);
  double value = 0.0;
  switch (property.kind) {
    case PropertyKind::Common:
      value = t_f + t_1mf - std::ldexp(1.0, 1 - static_cast<int>(t));
      break;
    case PropertyKind::GeometricCommon:
      value = t_f * t_1mf - std::ldexp(1.0, -2 * static_cast<int>(t));
      break;
    case PropertyKind::Sidorenko:
      value = t_f - std::pow(alpha, td);
      break;
    case PropertyKind::Prevalence:
      value = t_f;
      break;
    case PropertyKind::Alon: {
      require_l(property);
      std::uint64_t l = *property.l;
      double scaled = scaled_alon(alpha, l, t_f, t_1mf, t);
      long double unscaled = std::ldexp(static_cast<long double>(scaled),
                                        -static_cast<int>(std::min<std::uint64_t>(l, 1u << 30)));
      return {static_cast<double>(unscaled), scaled};
    }
  }
  return {value, value};
}

DefectReport defect(const LinearSystem& s, const GroupFunction& f, const Property& property, Method method) {
  if (method == Method::BruteExact) return defect(s, to_exact(f), property);
  require_l(property);
  DefectReport r;
  r.system_id = s.label();
  r.property = property;
  r.variables = s.variables();
  r.method = Method::Fourier;
  r.alpha = mean(f);
  check_geometric_mean(property, r.alpha);
  r.t_f = t_fourier(s, f);
  r.t_1mf = t_fourier(s, f.complement());
  std::tie(r.value, r.scaled_value) = defect_formula(property, r.t_f, r.t_1mf, r.alpha, r.variables);
  return r;
}

DefectReport defect(const LinearSystem& s, const ExactFunction& f, const Property& property) {
  require_l(property);
  DefectReport r;
  r.system_id = s.label();
  r.property = property;
  r.variables = s.variables();
  r.method = Method::BruteExact;
  Rational alpha = f.mean();
  r.alpha = alpha.get_d();
  check_geometric_mean(property, r.alpha);
  Rational tf = t_brute(s, f);
  Rational t1 = t_brute(s, f.complement());
  r.t_f = tf.get_d();
  r.t_1mf = t1.get_d();
  const std::size_t t = s.variables();
  const Rational two = 2;
  std::optional<Rational> exact;
  switch (property.kind) {
    case PropertyKind::Common:
      exact = Rational(tf + t1 - pow(Rational(1, 2), t - 1));
      break;
    case PropertyKind::GeometricCommon:
      exact = Rational(tf * t1 - pow(Rational(1, 2), 2 * t));
      break;
    case PropertyKind::Sidorenko:
      exact = Rational(tf - pow(alpha, t));
      break;
    case PropertyKind::Prevalence:
      exact = tf;
      break;
    case PropertyKind::Alon:
      if (*property.l <= 100'000) {
        std::uint64_t l = *property.l;
        exact = Rational(pow(alpha, l) * tf + pow(Rational(1 - alpha), l) * t1 - pow(Rational(1, 2), t + l - 1));
      }
      break;
  }
  r.exact_alpha = alpha;
  r.exact_t_f = tf;
  r.exact_t_1mf = t1;
  r.exact_value = exact;
  std::tie(r.value, r.scaled_value) = defect_formula(property, r.t_f, r.t_1mf, r.alpha, t);
  if (exact && property.kind != PropertyKind::Alon) {
    r.value = exact->get_d();
    r.scaled_value = r.value;
  }
  return r;
}

namespace {
constexpr double kDegenerateT = 1e-14;
}

AlonWitness alon_witness(const GroupFunction& f, const LinearSystem& s, std::uint64_t l) {
  if (l == 0) throw Error(Errc::LTooSmall, "l must be positive");
  double alpha = mean(f);
  if (std::abs(alpha - 0.5) > 1e-9)
    throw Error(Errc::MeanConstraintViolated, "witness construction needs mean 1/2");

  AlonWitness out{f, false, 0.0, 0, 0.0};
  GroupFunction base = f;
  double tf = t_product(s, f);
  double t1 = t_product(s, f.complement());
  if (t1 < tf) {
    base = f.complement();
    std::swap(tf, t1);
    out.swapped = true;
  }
  // The Fourier path leaves round-off of order 1e-17 where T is exactly zero.
  if (tf <= kDegenerateT) throw Error(Errc::DegenerateT, "T(f) = 0, so log sqrt(T(1-f)/T(f)) is undefined");
  out.c = 0.5 * std::log(t1 / tf);

  std::vector<double> values(base.values().begin(), base.values().end());
  for (double v : values)
    if (v <= 0.9) ++out.support;
  if (out.c == 0.0) {
    out.function = base;
    return out;
  }
  auto min_l = static_cast<std::uint64_t>(std::ceil(45.0 * out.c / 4.0));
  if (l < min_l)
    throw Error(Errc::LTooSmall, "need l >= " + std::to_string(min_l) + ", got " + std::to_string(l));

  out.added = static_cast<double>(base.size()) / static_cast<double>(out.support) * out.c /
              (2.0 * static_cast<double>(l));
  for (double& v : values)
    if (v <= 0.9) v += out.added;
  out.function = GroupFunction(base.p(), base.n(), std::move(values));
  return out;
}

}  // namespace commonsys
