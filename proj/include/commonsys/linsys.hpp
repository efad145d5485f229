#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace commonsys {

/// True for odd primes in the supported range 3..31.
bool is_supported_modulus(std::int64_t p);

/// A homogeneous full-rank system M x = 0 over F_p together with a kernel
/// parameterization x_i = psi_i(y), y in F_p^D, D = t - m.
///
/// Coefficients are stored reduced into {0..p-1}. The kernel basis comes from
/// the reduced row-echelon form (leftmost pivot, smallest row index), so the
/// parameterization is reproducible: one parameter per non-pivot column, in
/// column order.
class LinearSystem {
 public:
  /// Validates and builds a system. Negative entries are reduced mod p.
  /// Throws NotOddPrime, RankDeficient, NoFreeVariables, MalformedDocument.
  static LinearSystem from_rows(std::int64_t p, const std::vector<std::vector<std::int64_t>>& rows,
                                std::string label = {});

  std::uint32_t modulus() const { return p_; }
  std::size_t equations() const { return m_; }
  std::size_t variables() const { return t_; }
  std::size_t parameters() const { return t_ - m_; }
  const std::string& label() const { return label_; }

  std::uint32_t coeff(std::size_t row, std::size_t var) const { return matrix_[row * t_ + var]; }
  std::vector<std::uint32_t> row(std::size_t r) const;

  /// Coefficients of psi_var as a vector in F_p^D.
  std::vector<std::uint32_t> kernel_form(std::size_t var) const;
  std::uint32_t kernel_coeff(std::size_t var, std::size_t param) const {
    return kernel_[var * parameters() + param];
  }

  /// (psi_1(y), ..., psi_t(y)) for scalar parameters y in F_p^D.
  std::vector<std::uint32_t> solution_at(const std::vector<std::uint32_t>& y) const;

  /// Canonical structured-text form {"p":..,"matrix":[[..]]}.
  std::string to_document() const;

  friend bool operator==(const LinearSystem& a, const LinearSystem& b) {
    return a.p_ == b.p_ && a.m_ == b.m_ && a.t_ == b.t_ && a.matrix_ == b.matrix_;
  }

 private:
  LinearSystem() = default;
  static LinearSystem build(std::uint32_t p, std::size_t m, std::size_t t,
                            std::vector<std::uint32_t> matrix, std::string label,
                            bool require_free);

  std::uint32_t p_ = 0;
  std::size_t m_ = 0;
  std::size_t t_ = 0;
  std::vector<std::uint32_t> matrix_;  // m x t row-major
  std::vector<std::uint32_t> kernel_;  // t x D row-major
  std::string label_;

  friend struct Factorization factor_disjoint(const LinearSystem& s);
};

/// Parses {"p": 3, "matrix": [[1,-1,1,-1]]}.
LinearSystem parse_system(std::string_view document);

/// Named presets: "phi", "a4", "a5", "ap3", "schur", built for modulus p.
LinearSystem preset_system(std::string_view name, std::int64_t p = 3);
bool is_preset_name(std::string_view name);

bool is_translation_invariant(const LinearSystem& s);

/// Pads every row with l zero columns: l extra unconstrained variables.
LinearSystem add_free_variables(const LinearSystem& s, std::size_t l);

/// Blocks of rows whose variable supports form connected components of the
/// row/variable incidence graph. Blocks may have D = 0 (e.g. a row x_1 = 0);
/// columns that appear in no row are reported as isolated columns.
struct Factorization {
  std::vector<LinearSystem> blocks;
  /// Original column indices used by each block, in block-local order.
  std::vector<std::vector<std::size_t>> block_columns;
  /// Columns in no row's support (free variables).
  std::vector<std::size_t> isolated_columns;
  /// Concatenation of block_columns followed by isolated_columns; a
  /// permutation of 0..t-1.
  std::vector<std::size_t> column_order;
};

Factorization factor_disjoint(const LinearSystem& s);

/// Rank of an arbitrary matrix over F_p (p prime).
std::size_t rank_mod_p(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t p);

/// Modular inverse for p prime, a != 0 mod p.
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

}  // namespace commonsys
