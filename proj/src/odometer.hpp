#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace commonsys::detail {

/// Enumerates z = (z_1, ..., z_K) in (F_p^n)^K and tracks the t vectors
/// w_i = sum_k forms[i][k] z_k in F_p^n as mixed-radix indices. The linear
/// position u in [0, p^(nK)) orders digits as (k, c) with k fastest.
///
/// Every odometer step adds 1 mod p to one digit (wraps included), so each
/// affected w_i coordinate moves by forms[i][k] mod p.
class FormOdometer {
 public:
  FormOdometer(std::uint32_t p, std::uint32_t n, std::size_t t, std::size_t k,
               std::vector<std::uint32_t> forms /* t x k row-major */)
      : p_(p), n_(n), t_(t), k_(k), forms_(std::move(forms)), z_(n * k, 0),
        wdig_(t * n, 0), w_(t, 0), pw_(n, 1) {
    for (std::uint32_t c = 1; c < n; ++c) pw_[c] = pw_[c - 1] * p;
  }

  /// Positions the odometer at linear index u.
  void seek(std::uint64_t u) {
    for (auto& d : z_) {
      d = static_cast<std::uint32_t>(u % p_);
      u /= p_;
    }
    for (std::size_t i = 0; i < t_; ++i) {
      std::size_t idx = 0;
      for (std::uint32_t c = 0; c < n_; ++c) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < k_; ++k) acc += std::uint64_t(forms_[i * k_ + k]) * z_[c * k_ + k];
        std::uint32_t d = static_cast<std::uint32_t>(acc % p_);
        wdig_[i * n_ + c] = d;
        idx += d * pw_[c];
      }
      w_[i] = idx;
    }
  }

  void next() {
    for (std::size_t pos = 0; pos < z_.size(); ++pos) {
      bump(pos);
      if (z_[pos] != 0) return;
    }
  }

  const std::vector<std::size_t>& indices() const { return w_; }
  /// Digit z_k coordinate c.
  std::uint32_t param_digit(std::size_t k, std::uint32_t c) const { return z_[c * k_ + k]; }

 private:
  void bump(std::size_t pos) {
    std::size_t c = pos / k_, k = pos % k_;
    z_[pos] = (z_[pos] + 1) % p_;
    for (std::size_t i = 0; i < t_; ++i) {
      std::uint32_t a = forms_[i * k_ + k];
      if (a == 0) continue;
      std::uint32_t& d = wdig_[i * n_ + c];
      std::uint32_t nd = (d + a) % p_;
      w_[i] = w_[i] + nd * pw_[c] - d * pw_[c];
      d = nd;
    }
  }

  std::uint32_t p_, n_;
  std::size_t t_, k_;
  std::vector<std::uint32_t> forms_;
  std::vector<std::uint32_t> z_;
  std::vector<std::uint32_t> wdig_;
  std::vector<std::size_t> w_;
  std::vector<std::size_t> pw_;
};

/// p^(n*k) if it does not exceed cap, otherwise 0.
inline std::uint64_t bounded_power(std::uint32_t p, std::uint64_t e, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    v *= p;
    if (v > cap) return 0;
  }
  return v;
}

}  // namespace commonsys::detail
