#include "fgen/presentations.hpp"

#include <algorithm>

namespace fgen {

IntMatrix exponent_matrix(const WordTuple& h) {
  IntMatrix m(h.words.size(), std::vector<BigInt>(std::size_t(h.rank), 0));
  for (std::size_t i = 0; i < h.words.size(); ++i)
    for (Letter x : h.words[i].letters()) {
      if (is_positive_letter(x)) m[i][std::size_t(x / 2)] += 1;
      else m[i][std::size_t(x / 2)] -= 1;
    }
  return m;
}

std::string AbelianizationResult::str() const {
  if (free_rank == 0 && invariant_factors.empty()) return "trivial";
  std::string out;
  for (const auto& d : invariant_factors) {
    if (!out.empty()) out += " x ";
    out += "Z/" + d.str();
  }
  if (free_rank > 0) {
    if (!out.empty()) out += " x ";
    out += free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
  }
  return out;
}

namespace {

BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return abs(a);
  }
  BigInt x1, y1;
  BigInt g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

void RowFolder::add_row(std::vector<BigInt> row) {
  if (row.size() != cols_) throw std::invalid_argument("row width mismatch");
  for (std::size_t j = 0; j < cols_; ++j) {
    if (row[j] == 0) continue;
    auto& p = pivot_[j];
    if (p.empty()) {
      if (row[j] < 0)
        for (auto& v : row) v = -v;
      p = std::move(row);
      return;
    }
    // Replace the pivot by the gcd combination and reduce the incoming row.
    BigInt x, y;
    const BigInt g = ext_gcd(p[j], row[j], x, y);
    const BigInt pj = p[j] / g, rj = row[j] / g;
    std::vector<BigInt> new_pivot(cols_);
    for (std::size_t c = j; c < cols_; ++c) {
      new_pivot[c] = x * p[c] + y * row[c];
      BigInt reduced = pj * row[c] - rj * p[c];
      row[c] = std::move(reduced);
    }
    p = std::move(new_pivot);
  }
}

IntMatrix RowFolder::rows() const {
  IntMatrix out;
  for (const auto& p : pivot_)
    if (!p.empty()) out.push_back(p);
  return out;
}

SmithNormalForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  SmithNormalForm s;
  s.d = a;
  s.u.assign(m, std::vector<BigInt>(m, 0));
  s.v.assign(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < m; ++i) s.u[i][i] = 1;
  for (std::size_t j = 0; j < n; ++j) s.v[j][j] = 1;

  auto swap_rows = [&](std::size_t i, std::size_t k) {
    std::swap(s.d[i], s.d[k]);
    std::swap(s.u[i], s.u[k]);
  };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) std::swap(s.d[i][j], s.d[i][k]);
    for (std::size_t i = 0; i < n; ++i) std::swap(s.v[i][j], s.v[i][k]);
  };
  auto add_row_multiple = [&](std::size_t dst, std::size_t src, const BigInt& c) {
    for (std::size_t j = 0; j < n; ++j) s.d[dst][j] += c * s.d[src][j];
    for (std::size_t j = 0; j < m; ++j) s.u[dst][j] += c * s.u[src][j];
  };
  auto add_col_multiple = [&](std::size_t dst, std::size_t src, const BigInt& c) {
    for (std::size_t i = 0; i < m; ++i) s.d[i][dst] += c * s.d[i][src];
    for (std::size_t i = 0; i < n; ++i) s.v[i][dst] += c * s.v[i][src];
  };
  auto negate_row = [&](std::size_t i) {
    for (auto& v : s.d[i]) v = -v;
    for (auto& v : s.u[i]) v = -v;
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // Smallest nonzero entry in the remaining block becomes the pivot.
      std::size_t pi = t, pj = t;
      bool found = false;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (s.d[i][j] == 0) continue;
          if (!found || abs(s.d[i][j]) < abs(s.d[pi][pj])) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) return s;  // remaining block is zero
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);
      if (s.d[t][t] < 0) negate_row(t);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s.d[i][t] == 0) continue;
        add_row_multiple(i, t, -(s.d[i][t] / s.d[t][t]));
        if (s.d[i][t] != 0) clean = false;  // remainder left, pivot will shrink
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s.d[t][j] == 0) continue;
        add_col_multiple(j, t, -(s.d[t][j] / s.d[t][t]));
        if (s.d[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce the divisibility chain.
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n && divides_all; ++j)
          if (s.d[i][j] % s.d[t][t] != 0) {
            add_row_multiple(t, i, 1);
            divides_all = false;
          }
      if (divides_all) break;
    }
  }
  return s;
}

AbelianizationResult abelianization_of_rows(std::size_t cols, const IntMatrix& rows) {
  auto snf = smith_normal_form(rows);
  AbelianizationResult result;
  std::size_t nonzero = 0;
  for (std::size_t t = 0; t < std::min(rows.size(), cols); ++t) {
    if (snf.d[t][t] == 0) break;
    ++nonzero;
    if (snf.d[t][t] > 1) result.invariant_factors.push_back(snf.d[t][t]);
  }
  result.free_rank = cols - nonzero;
  return result;
}

AbelianizationResult abelianization(const WordTuple& h) {
  RowFolder folder(std::size_t(h.rank));
  for (const auto& w : h.words) {
    std::vector<BigInt> row(std::size_t(h.rank), 0);
    for (Letter x : w.letters()) {
      if (is_positive_letter(x)) row[std::size_t(x / 2)] += 1;
      else row[std::size_t(x / 2)] -= 1;
    }
    folder.add_row(std::move(row));
  }
  return abelianization_of_rows(std::size_t(h.rank), folder.rows());
}

BigInt determinant(const IntMatrix& a) {
  // Bareiss fraction-free elimination.
  const std::size_t n = a.size();
  if (n == 0) return 1;
  IntMatrix m = a;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    if (m[t][t] == 0) {
      std::size_t swap_with = t + 1;
      while (swap_with < n && m[swap_with][t] == 0) ++swap_with;
      if (swap_with == n) return 0;
      std::swap(m[t], m[swap_with]);
      sign = -sign;
    }
    for (std::size_t i = t + 1; i < n; ++i)
      for (std::size_t j = t + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[t][t] - m[i][t] * m[t][j]) / prev;
    prev = m[t][t];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

DegenerateLetterSets degenerate_letter_sets(const MarkovianAutomaton& a) {
  std::vector<char> emitted(std::size_t(2 * a.rank()), 0);
  for (std::size_t q = 0; q < a.num_states(); ++q)
    for (Letter x = 0; x < Letter(2 * a.rank()); ++x)
      if (a.target(q, x) != MarkovianAutomaton::no_state) emitted[x] = 1;
  DegenerateLetterSets sets;
  sets.has_inverse_pair = false;
  sets.unused_positive_letters = 0;
  for (int j = 0; j < a.rank(); ++j) {
    const bool pos = emitted[std::size_t(2 * j)], neg = emitted[std::size_t(2 * j + 1)];
    if (pos && neg) sets.has_inverse_pair = true;
    if (!pos && !neg) ++sets.unused_positive_letters;
  }
  return sets;
}

DegenerateClass degenerate_class_check(const WordTuple& h, const DegenerateLetterSets& sets) {
  const auto ab = abelianization(h);
  const std::size_t predicted_free =
      sets.unused_positive_letters + (sets.has_inverse_pair ? 0 : 1);
  if (ab.free_rank == predicted_free && ab.invariant_factors.empty())
    return DegenerateClass::consistent_trivial;
  if (sets.has_inverse_pair && ab.free_rank == predicted_free &&
      ab.invariant_factors.size() == 1 && ab.invariant_factors[0] == 2)
    return DegenerateClass::consistent_z2;
  return DegenerateClass::other;
}

CollisionStats collision_statistic(const WordTuple& h, std::size_t ell) {
  TupleStats s{};
  s.min_len = h.words.empty() ? 0 : h.words.front().length();
  for (const auto& w : h.words) s.min_len = std::min(s.min_len, w.length());
  if (ell > s.min_len)
    throw std::invalid_argument("collision prefix length " + std::to_string(ell) +
                                " exceeds Min(h) = " + std::to_string(s.min_len));
  constexpr std::uint64_t cap = std::uint64_t(1) << 32;
  PrefixTrie trie(2 * h.rank);
  CollisionStats stats;
  for (const auto& w : h.words) {
    const std::uint64_t shared = trie.insert(w.letters(), ell);
    stats.pairs = std::min(cap, stats.pairs + shared);
    if (shared > 0) stats.exists = true;
  }
  return stats;
}

}  // namespace fgen
