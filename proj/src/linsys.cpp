#include "commonsys/linsys.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "commonsys/error.hpp"

namespace commonsys {

using json = nlohmann::json;

bool is_supported_modulus(std::int64_t p) {
  if (p < 3 || p > 31 || p % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

namespace {

struct Echelon {
  std::vector<std::vector<std::uint32_t>> rows;  // reduced, nonzero rows only
  std::vector<std::size_t> pivots;
};

// Reduced row-echelon form; pivots are chosen in the leftmost column with a
// nonzero entry, taking the smallest remaining row index.
Echelon rref(std::vector<std::vector<std::uint32_t>> a, std::uint32_t p) {
  Echelon out;
  if (a.empty()) return out;
  std::size_t cols = a.front().size();
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols && next < a.size(); ++c) {
    std::size_t piv = next;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[next], a[piv]);
    std::uint32_t inv = inverse_mod(a[next][c], p);
    for (auto& v : a[next]) v = static_cast<std::uint32_t>(std::uint64_t(v) * inv % p);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == next || a[r][c] == 0) continue;
      std::uint64_t factor = a[r][c];
      for (std::size_t k = 0; k < cols; ++k)
        a[r][k] = static_cast<std::uint32_t>((a[r][k] + p * std::uint64_t(p) - factor * a[next][k]) % p);
    }
    out.pivots.push_back(c);
    ++next;
  }
  a.resize(next);
  out.rows = std::move(a);
  return out;
}

}  // namespace

std::size_t rank_mod_p(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t p) {
  return rref(std::move(rows), p).pivots.size();
}

LinearSystem LinearSystem::build(std::uint32_t p, std::size_t m, std::size_t t,
                                 std::vector<std::uint32_t> matrix, std::string label,
                                 bool require_free) {
  std::vector<std::vector<std::uint32_t>> rows(m, std::vector<std::uint32_t>(t));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < t; ++c) rows[r][c] = matrix[r * t + c];
  Echelon e = rref(rows, p);
  if (e.pivots.size() < m)
    throw Error(Errc::RankDeficient,
                "rank " + std::to_string(e.pivots.size()) + " < " + std::to_string(m) + " equations");
  if (require_free && t <= m)
    throw Error(Errc::NoFreeVariables, "need more variables than equations");

  LinearSystem s;
  s.p_ = p;
  s.m_ = m;
  s.t_ = t;
  s.matrix_ = std::move(matrix);
  s.label_ = std::move(label);

  std::vector<bool> is_pivot(t, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::size_t d = t - m;
  s.kernel_.assign(t * d, 0);
  std::size_t param = 0;
  for (std::size_t c = 0; c < t; ++c) {
    if (is_pivot[c]) continue;
    s.kernel_[c * d + param] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      std::uint32_t v = e.rows[r][c];
      s.kernel_[e.pivots[r] * d + param] = (p - v) % p;
    }
    ++param;
  }
  return s;
}

LinearSystem LinearSystem::from_rows(std::int64_t p, const std::vector<std::vector<std::int64_t>>& rows,
                                     std::string label) {
  if (!is_supported_modulus(p))
    throw Error(Errc::NotOddPrime, "p = " + std::to_string(p) + " is not an odd prime <= 31");
  if (rows.empty()) throw Error(Errc::MalformedDocument, "matrix has no rows");
  std::size_t t = rows.front().size();
  if (t == 0) throw Error(Errc::MalformedDocument, "matrix has no columns");
  std::vector<std::uint32_t> matrix;
  matrix.reserve(rows.size() * t);
  for (const auto& row : rows) {
    if (row.size() != t) throw Error(Errc::MalformedDocument, "ragged matrix rows");
    for (auto v : row) {
      std::int64_t r = v % p;
      if (r < 0) r += p;
      matrix.push_back(static_cast<std::uint32_t>(r));
    }
  }
  return build(static_cast<std::uint32_t>(p), rows.size(), t, std::move(matrix), std::move(label), true);
}

std::vector<std::uint32_t> LinearSystem::row(std::size_t r) const {
  return {matrix_.begin() + static_cast<std::ptrdiff_t>(r * t_),
          matrix_.begin() + static_cast<std::ptrdiff_t>((r + 1) * t_)};
}

std::vector<std::uint32_t> LinearSystem::kernel_form(std::size_t var) const {
  std::size_t d = parameters();
  return {kernel_.begin() + static_cast<std::ptrdiff_t>(var * d),
          kernel_.begin() + static_cast<std::ptrdiff_t>((var + 1) * d)};
}

std::vector<std::uint32_t> LinearSystem::solution_at(const std::vector<std::uint32_t>& y) const {
  std::size_t d = parameters();
  std::vector<std::uint32_t> x(t_, 0);
  for (std::size_t i = 0; i < t_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < d; ++k) acc += std::uint64_t(kernel_[i * d + k]) * y[k];
    x[i] = static_cast<std::uint32_t>(acc % p_);
  }
  return x;
}

std::string LinearSystem::to_document() const {
  json rows = json::array();
  for (std::size_t r = 0; r < m_; ++r) rows.push_back(row(r));
  json doc = {{"p", p_}, {"matrix", rows}};
  return doc.dump();
}

LinearSystem parse_system(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("matrix"))
    throw Error(Errc::MalformedDocument, "expected fields \"p\" and \"matrix\"");
  if (!doc["p"].is_number_integer()) throw Error(Errc::MalformedDocument, "\"p\" must be an integer");
  const json& m = doc["matrix"];
  if (!m.is_array()) throw Error(Errc::MalformedDocument, "\"matrix\" must be an array of arrays");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : m) {
    if (!r.is_array()) throw Error(Errc::MalformedDocument, "\"matrix\" must be an array of arrays");
    std::vector<std::int64_t> row;
    for (const auto& v : r) {
      if (!v.is_number_integer()) throw Error(Errc::MalformedDocument, "matrix entries must be integers");
      row.push_back(v.get<std::int64_t>());
    }
    rows.push_back(std::move(row));
  }
  std::string label = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "";
  return LinearSystem::from_rows(doc["p"].get<std::int64_t>(), rows, std::move(label));
}

bool is_preset_name(std::string_view name) {
  return name == "phi" || name == "a4" || name == "a5" || name == "ap3" || name == "schur";
}

LinearSystem preset_system(std::string_view name, std::int64_t p) {
  std::string label(name);
  if (name == "phi")
    return LinearSystem::from_rows(p, {{1, -1, 1, -1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, -1, 1, -1, 1}}, label);
  if (name == "a4") return LinearSystem::from_rows(p, {{1, -1, 1, -1}}, label);
  if (name == "a5") return LinearSystem::from_rows(p, {{1, -1, 1, -1, 1}}, label);
  if (name == "ap3") return LinearSystem::from_rows(p, {{1, -2, 1}}, label);
  if (name == "schur") return LinearSystem::from_rows(p, {{1, 1, -1}}, label);
  throw Error(Errc::MalformedDocument, "unknown preset '" + label + "'");
}

bool is_translation_invariant(const LinearSystem& s) {
  for (std::size_t r = 0; r < s.equations(); ++r) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < s.variables(); ++i) sum += s.coeff(r, i);
    if (sum % s.modulus() != 0) return false;
  }
  return true;
}

LinearSystem add_free_variables(const LinearSystem& s, std::size_t l) {
  if (l == 0) return s;
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t r = 0; r < s.equations(); ++r) {
    std::vector<std::int64_t> row(s.variables() + l, 0);
    for (std::size_t i = 0; i < s.variables(); ++i) row[i] = s.coeff(r, i);
    rows.push_back(std::move(row));
  }
  std::string label = s.label().empty() ? "" : s.label() + "^(" + std::to_string(l) + ")";
  return LinearSystem::from_rows(s.modulus(), rows, std::move(label));
}

Factorization factor_disjoint(const LinearSystem& s) {
  std::size_t t = s.variables(), m = s.equations();
  std::vector<std::size_t> parent(t);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(t, false);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t first = t;
    for (std::size_t i = 0; i < t; ++i) {
      if (s.coeff(r, i) == 0) continue;
      used[i] = true;
      if (first == t) first = i;
      else parent[find(i)] = find(first);
    }
  }

  // Blocks ordered by their smallest column.
  std::vector<std::size_t> block_of_root(t, t);
  Factorization out;
  for (std::size_t i = 0; i < t; ++i) {
    if (!used[i]) {
      out.isolated_columns.push_back(i);
      continue;
    }
    std::size_t root = find(i);
    if (block_of_root[root] == t) {
      block_of_root[root] = out.block_columns.size();
      out.block_columns.emplace_back();
    }
    out.block_columns[block_of_root[root]].push_back(i);
  }
  std::vector<std::vector<std::size_t>> block_rows(out.block_columns.size());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < t; ++i) {
      if (s.coeff(r, i) != 0) {
        block_rows[block_of_root[find(i)]].push_back(r);
        break;
      }
    }
  }
  for (std::size_t b = 0; b < out.block_columns.size(); ++b) {
    const auto& cols = out.block_columns[b];
    std::vector<std::uint32_t> matrix;
    for (auto r : block_rows[b])
      for (auto c : cols) matrix.push_back(s.coeff(r, c));
    out.blocks.push_back(LinearSystem::build(s.modulus(), block_rows[b].size(), cols.size(),
                                             std::move(matrix), {}, false));
    out.column_order.insert(out.column_order.end(), cols.begin(), cols.end());
  }
  out.column_order.insert(out.column_order.end(), out.isolated_columns.begin(),
                          out.isolated_columns.end());
  return out;
}

}  // namespace commonsys
