#ifndef FGEN_TUPLES_HPP
#define FGEN_TUPLES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgen/words.hpp"

namespace fgen {

/// A finite tuple of nonempty reduced words over a shared alphabet.
/// Duplicate entries are allowed.
struct WordTuple {
  int rank = 1;
  std::vector<Word> words;

  static WordTuple make(const Alphabet& a, std::vector<Word> words);

  std::size_t size() const noexcept { return words.size(); }
};

/// Min/Max word length, tuple size, and the longest-common-prefix statistic
/// over the 2k-entry sequence h^+- = (h_1, h_1^-1, ..., h_k, h_k^-1).
/// Lcp pairs distinct entries only; duplicate words at different indices do
/// pair (giving Lcp equal to the full word length).
struct TupleStats {
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  std::size_t nbr = 0;
  std::size_t lcp = 0;
};

TupleStats stats(const WordTuple& h);

/// Central tree property: 2 Lcp(h) < Min(h), strict.
bool has_central_tree_property(const WordTuple& h);

/// Lcp(h) <= bound.
bool lcp_below(const WordTuple& h, std::size_t bound);

/// Length of the longest word with at least two occurrences as a plain factor
/// among the entries of h^+-, occurrences counted as distinct
/// (entry index, start position) pairs. 0 if every letter occurs once.
std::size_t longest_repeated_factor(const WordTuple& h);

enum class Certificate { certified, inconclusive };

/// Sufficient-malnormality certificate: certified iff 3 Lcp < Min and the
/// longest repeated factor is shorter than floor((Min - 3 Lcp) / 2).
/// Sound but not complete.
Certificate malnormality_certificate(const WordTuple& h);

/// Arena-backed prefix trie over letter sequences; used for the Lcp statistic
/// and prefix-collision counting. Reusable across inserts via clear().
class PrefixTrie {
 public:
  explicit PrefixTrie(int num_letters);

  /// Inserts the first min(len, depth_limit) letters and returns the number
  /// of previously inserted sequences sharing the full inserted prefix.
  std::uint64_t insert(std::span<const Letter> word, std::size_t depth_limit);

  /// Deepest depth at which two distinct inserted entries share a prefix.
  std::size_t deepest_shared() const noexcept { return deepest_shared_; }

  void clear();
  std::size_t node_count() const noexcept { return counts_.size(); }

 private:
  int num_letters_;
  std::vector<std::int32_t> children_;  // node i's children at [i*num_letters, ...)
  std::vector<std::int32_t> counts_;
  std::size_t deepest_shared_ = 0;

  std::int32_t new_node();
};

/// Suffix array (doubling construction) over a sequence of non-negative ints.
std::vector<std::int32_t> suffix_array(std::span<const std::int32_t> text);

/// Kasai LCP array: lcp[i] = common prefix length of suffixes sa[i-1], sa[i].
std::vector<std::int32_t> lcp_array(std::span<const std::int32_t> text,
                                    std::span<const std::int32_t> sa);

/// Tuple file format: one word per line, '#' comments and blank lines ignored.
/// Rank is inferred from the letters present unless given explicitly.
WordTuple parse_tuple_text(std::string_view text, std::optional<int> rank = std::nullopt);
std::string to_tuple_text(const WordTuple& h);

}  // namespace fgen

#endif
