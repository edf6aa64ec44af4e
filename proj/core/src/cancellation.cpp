#include "fgen/cancellation.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <numeric>

namespace fgen {

Lambda Lambda::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    throw std::invalid_argument("lambda must be a rational p/q, e.g. 1/6");
  std::int64_t p = 0, q = 0;
  auto r1 = std::from_chars(text.data(), text.data() + slash, p);
  auto r2 = std::from_chars(text.data() + slash + 1, text.data() + text.size(), q);
  if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != text.data() + slash ||
      r2.ptr != text.data() + text.size())
    throw std::invalid_argument("lambda must be a rational p/q, e.g. 1/6");
  return Lambda(p, q);
}

namespace {

struct RotationSlot {
  RotationIndex index;
  std::vector<Letter> letters;
};

std::vector<RotationSlot> materialize_rotations(const WordTuple& h) {
  for (const auto& w : h.words)
    if (!is_cyclically_reduced(w))
      throw std::invalid_argument("piece computation requires cyclically reduced words");
  std::vector<RotationSlot> slots;
  std::size_t total = 0;
  for (const auto& w : h.words) total += 2 * w.length();
  slots.reserve(total);
  for (std::size_t i = 0; i < h.words.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const Word base = side == 0 ? h.words[i] : inverse(h.words[i]);
      const auto& ls = base.letters();
      for (std::size_t rho = 0; rho < ls.size(); ++rho) {
        std::vector<Letter> rot;
        rot.reserve(ls.size());
        rot.insert(rot.end(), ls.begin() + long(rho), ls.end());
        rot.insert(rot.end(), ls.begin(), ls.begin() + long(rho));
        slots.push_back({RotationIndex{i, side == 1, rho}, std::move(rot)});
      }
    }
  }
  return slots;
}

std::size_t lcp_len(const std::vector<Letter>& a, const std::vector<Letter>& b) {
  const std::size_t m = std::min(a.size(), b.size());
  std::size_t t = 0;
  while (t < m && a[t] == b[t]) ++t;
  return t;
}

std::vector<RotationPiece> collect(const std::vector<RotationSlot>& slots,
                                   const std::vector<std::size_t>& best,
                                   const std::vector<std::size_t>& partner) {
  std::vector<RotationPiece> out;
  out.reserve(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    RotationPiece rp;
    rp.slot = slots[s].index;
    rp.word_length = slots[s].letters.size();
    rp.piece = best[s];
    rp.partner = slots[partner[s]].index;
    out.push_back(rp);
  }
  return out;
}

}  // namespace

std::vector<RotationPiece> max_piece_per_rotation(const WordTuple& h) {
  auto slots = materialize_rotations(h);
  std::vector<std::size_t> order(slots.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = slots[a].letters;
    const auto& y = slots[b].letters;
    const int cmp = std::memcmp(x.data(), y.data(), std::min(x.size(), y.size()));
    if (cmp != 0) return cmp < 0;
    if (x.size() != y.size()) return x.size() < y.size();
    return a < b;
  });

  std::vector<std::size_t> best(slots.size(), 0), partner(slots.size(), 0);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const std::size_t s = order[k], t = order[k + 1];
    const std::size_t l = lcp_len(slots[s].letters, slots[t].letters);
    if (l > best[s]) {
      best[s] = l;
      partner[s] = t;
    }
    if (l > best[t]) {
      best[t] = l;
      partner[t] = s;
    }
  }
  return collect(slots, best, partner);
}

std::vector<RotationPiece> pieces_naive(const WordTuple& h, std::size_t rotation_cap) {
  auto slots = materialize_rotations(h);
  if (slots.size() > rotation_cap)
    throw ResourceLimitError("pieces_naive: " + std::to_string(slots.size()) +
                             " rotations exceed cap " + std::to_string(rotation_cap));
  std::vector<std::size_t> best(slots.size(), 0), partner(slots.size(), 0);
  for (std::size_t s = 0; s < slots.size(); ++s)
    for (std::size_t t = s + 1; t < slots.size(); ++t) {
      const std::size_t l = lcp_len(slots[s].letters, slots[t].letters);
      if (l > best[s]) {
        best[s] = l;
        partner[s] = t;
      }
      if (l > best[t]) {
        best[t] = l;
        partner[t] = s;
      }
    }
  return collect(slots, best, partner);
}

std::optional<RotationPiece> cprime_violation(const WordTuple& h, Lambda lambda) {
  auto pieces = max_piece_per_rotation(h);
  for (const auto& rp : pieces) {
    if (std::int64_t(lambda.q) * std::int64_t(rp.piece) >=
        std::int64_t(lambda.p) * std::int64_t(rp.word_length))
      return rp;
  }
  return std::nullopt;
}

bool satisfies_cprime(const WordTuple& h, Lambda lambda) {
  return !cprime_violation(h, lambda).has_value();
}

}  // namespace fgen
