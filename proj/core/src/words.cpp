#include "fgen/words.hpp"

#include <algorithm>

namespace fgen {

Word Word::reduce(const Alphabet& a, std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter x : raw) {
    a.check_letter(x);
    if (!stack.empty() && stack.back() == inverse_letter(x)) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return Word(unchecked, a.rank, std::move(stack));
}

Word Word::from_reduced(const Alphabet& a, std::vector<Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    a.check_letter(letters[i]);
    if (i + 1 < letters.size() && letters[i + 1] == inverse_letter(letters[i]))
      throw std::invalid_argument("letter sequence is not reduced (cancellation at position " +
                                  std::to_string(i) + ")");
  }
  return Word(unchecked, a.rank, std::move(letters));
}

Word Word::parse(const Alphabet& a, std::string_view text) {
  if (text == "1") return Word(a);
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    try {
      raw.push_back(a.letter_from_char(text[i]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), i);
    }
  }
  return reduce(a, raw);
}

Word multiply(const Word& u, const Word& v) {
  if (u.rank() != v.rank())
    throw std::invalid_argument("alphabet mismatch: rank " + std::to_string(u.rank()) +
                                " vs " + std::to_string(v.rank()));
  // Both factors are reduced, so cancellation happens only at the seam.
  std::size_t i = u.length(), j = 0;
  while (i > 0 && j < v.length() && u[i - 1] == inverse_letter(v[j])) {
    --i;
    ++j;
  }
  std::vector<Letter> out;
  out.reserve(i + (v.length() - j));
  out.insert(out.end(), u.letters().begin(), u.letters().begin() + static_cast<long>(i));
  out.insert(out.end(), v.letters().begin() + static_cast<long>(j), v.letters().end());
  return Word(Word::unchecked, u.rank(), std::move(out));
}

Word inverse(const Word& u) {
  std::vector<Letter> out(u.length());
  for (std::size_t i = 0; i < u.length(); ++i)
    out[u.length() - 1 - i] = inverse_letter(u[i]);
  return Word(Word::unchecked, u.rank(), std::move(out));
}

CyclicReduction cyclic_reduce(const Word& u) {
  std::size_t lo = 0, hi = u.length();
  while (hi - lo >= 2 && u[lo] == inverse_letter(u[hi - 1])) {
    ++lo;
    --hi;
  }
  std::vector<Letter> core(u.letters().begin() + static_cast<long>(lo),
                           u.letters().begin() + static_cast<long>(hi));
  std::vector<Letter> conj(u.letters().begin(), u.letters().begin() + static_cast<long>(lo));
  return CyclicReduction{Word(Word::unchecked, u.rank(), std::move(core)),
                         Word(Word::unchecked, u.rank(), std::move(conj))};
}

bool is_cyclically_reduced(const Word& u) {
  if (u.empty()) return false;
  return u[0] != inverse_letter(u[u.length() - 1]);
}

std::vector<Word> rotations(const Word& u) {
  if (!is_cyclically_reduced(u))
    throw std::invalid_argument("rotations requires a cyclically reduced word");
  std::vector<Word> out;
  out.reserve(u.length());
  for (std::size_t k = 0; k < u.length(); ++k) {
    std::vector<Letter> rot;
    rot.reserve(u.length());
    rot.insert(rot.end(), u.letters().begin() + static_cast<long>(k), u.letters().end());
    rot.insert(rot.end(), u.letters().begin(), u.letters().begin() + static_cast<long>(k));
    out.emplace_back(Word::unchecked, u.rank(), std::move(rot));
  }
  return out;
}

BigInt count_reduced(int rank, int n) {
  Alphabet a(rank);  // validates rank
  if (n < 0) throw std::invalid_argument("negative word length");
  if (n == 0) return 1;
  BigInt base = 2 * rank - 1;
  BigInt result = 2 * rank;
  for (int i = 1; i < n; ++i) result *= base;
  return result;
}

BigInt count_cyclically_reduced(int rank, int n) {
  Alphabet a(rank);
  if (n < 0) throw std::invalid_argument("negative word length");
  if (n == 0) return 1;
  BigInt base = 2 * rank - 1;
  BigInt pw = 1;
  for (int i = 0; i < n; ++i) pw *= base;
  return pw + rank + (n % 2 == 0 ? rank - 1 : -(rank - 1));
}

std::vector<Word> enumerate_reduced(int rank, int n, std::uint64_t cap) {
  Alphabet a(rank);
  BigInt total = count_reduced(rank, n);
  if (total > cap)
    throw std::runtime_error("enumeration cap exceeded: |R_n| = " + total.str() +
                             " > " + std::to_string(cap));
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<Letter> cur;
  cur.reserve(static_cast<std::size_t>(n));
  const int m = a.num_letters();
  // Iterative DFS in letter-index order.
  auto emit = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.emplace_back(Word::unchecked, rank, cur);
      return;
    }
    for (int x = 0; x < m; ++x) {
      if (!cur.empty() && static_cast<Letter>(x) == inverse_letter(cur.back())) continue;
      cur.push_back(static_cast<Letter>(x));
      self(self);
      cur.pop_back();
    }
  };
  emit(emit);
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  Alphabet a(w.rank());
  std::string s;
  s.reserve(w.length());
  for (Letter x : w.letters()) s.push_back(a.letter_to_char(x));
  return s;
}

}  // namespace fgen
