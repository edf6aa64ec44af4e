#ifndef FGEN_WORDS_HPP
#define FGEN_WORDS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fgen {

using BigInt = boost::multiprecision::cpp_int;

/// A letter of the symmetrized alphabet, encoded as an index in [0, 2r).
/// Index 2j is the j-th positive letter, index 2j+1 its formal inverse,
/// so inversion is a single XOR.
using Letter = std::uint8_t;

constexpr Letter inverse_letter(Letter x) noexcept { return static_cast<Letter>(x ^ 1u); }
constexpr bool is_positive_letter(Letter x) noexcept { return (x & 1u) == 0; }

/// Symmetrized alphabet of a free group of rank r (1 <= r <= 26).
/// Text form: 'a'..'z' for positive letters, 'A'..'Z' for their inverses.
struct Alphabet {
  int rank;

  explicit Alphabet(int r) : rank(r) {
    if (r < 1 || r > 26) throw std::invalid_argument("alphabet rank must be in [1, 26]");
  }

  int num_letters() const noexcept { return 2 * rank; }

  char letter_to_char(Letter x) const {
    check_letter(x);
    return is_positive_letter(x) ? static_cast<char>('a' + x / 2)
                                 : static_cast<char>('A' + x / 2);
  }

  Letter letter_from_char(char c) const {
    if (c >= 'a' && c < 'a' + rank) return static_cast<Letter>(2 * (c - 'a'));
    if (c >= 'A' && c < 'A' + rank) return static_cast<Letter>(2 * (c - 'A') + 1);
    throw std::invalid_argument(std::string("character '") + c + "' is not a letter of rank-" +
                                std::to_string(rank) + " alphabet");
  }

  void check_letter(Letter x) const {
    if (x >= num_letters())
      throw std::invalid_argument("letter index " + std::to_string(int(x)) +
                                  " out of range for rank " + std::to_string(rank));
  }
};

/// Raised by the text parsers; position is a 0-based character offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A reduced word over a symmetrized alphabet. Immutable after construction;
/// the no-adjacent-inverse-pair invariant is established by the factories.
class Word {
 public:
  struct unchecked_t {};
  static constexpr unchecked_t unchecked{};

  Word() : rank_(1) {}
  explicit Word(const Alphabet& a) : rank_(static_cast<std::uint8_t>(a.rank)) {}

  /// Wraps an already-reduced letter sequence without re-checking it.
  Word(unchecked_t, int rank, std::vector<Letter> letters)
      : rank_(static_cast<std::uint8_t>(rank)), letters_(std::move(letters)) {}

  /// Reduces an arbitrary letter sequence by cancelling adjacent inverse pairs.
  static Word reduce(const Alphabet& a, std::span<const Letter> raw);

  /// Validating constructor: throws if the sequence is not reduced.
  static Word from_reduced(const Alphabet& a, std::vector<Letter> letters);

  /// Parses the text form ("abA" = a b a^-1). The single character "1"
  /// denotes the empty word.
  static Word parse(const Alphabet& a, std::string_view text);

  int rank() const noexcept { return rank_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  bool operator==(const Word& o) const noexcept { return letters_ == o.letters_; }
  bool operator!=(const Word& o) const noexcept { return !(*this == o); }
  bool operator<(const Word& o) const noexcept { return letters_ < o.letters_; }

 private:
  std::uint8_t rank_;
  std::vector<Letter> letters_;
};

/// u = conjugator . core . conjugator^-1 with core cyclically reduced (or empty).
struct CyclicReduction {
  Word core;
  Word conjugator;
};

Word multiply(const Word& u, const Word& v);
Word inverse(const Word& u);
CyclicReduction cyclic_reduce(const Word& u);
bool is_cyclically_reduced(const Word& u);

/// All |u| rotations of a cyclically reduced word, in order of rotation
/// amount 0..|u|-1. Duplicates are retained.
std::vector<Word> rotations(const Word& u);

/// |R_n| = 2r (2r-1)^{n-1} for n >= 1, and 1 for n = 0.
BigInt count_reduced(int rank, int n);

/// Exact count of cyclically reduced words of length n (trace formula):
/// |C_n| = (2r-1)^n + r + (r-1)(-1)^n for n >= 1, and 1 for n = 0.
BigInt count_cyclically_reduced(int rank, int n);

/// All reduced words of length n in lexicographic order of letter indices.
/// Test oracle; refuses to build more than `cap` words.
std::vector<Word> enumerate_reduced(int rank, int n, std::uint64_t cap = 10'000'000);

/// Text form of a word; the empty word prints as "1".
std::string to_string(const Word& w);

}  // namespace fgen

#endif
