#include "fgen/tuples.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace fgen {

WordTuple WordTuple::make(const Alphabet& a, std::vector<Word> words) {
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("tuple entries must be nonempty");
    if (w.rank() != a.rank)
      throw std::invalid_argument("tuple entries must share the tuple alphabet");
  }
  return WordTuple{a.rank, std::move(words)};
}

std::int32_t PrefixTrie::new_node() {
  auto id = static_cast<std::int32_t>(counts_.size());
  counts_.push_back(0);
  children_.resize(children_.size() + static_cast<std::size_t>(num_letters_), -1);
  return id;
}

PrefixTrie::PrefixTrie(int num_letters) : num_letters_(num_letters) { new_node(); }

void PrefixTrie::clear() {
  children_.clear();
  counts_.clear();
  deepest_shared_ = 0;
  new_node();
}

std::uint64_t PrefixTrie::insert(std::span<const Letter> word, std::size_t depth_limit) {
  std::int32_t node = 0;
  std::size_t depth = 0;
  const std::size_t limit = std::min(word.size(), depth_limit);
  while (depth < limit) {
    const std::size_t slot = std::size_t(node) * std::size_t(num_letters_) + word[depth];
    std::int32_t next = children_[slot];
    if (next < 0) {
      next = new_node();
      children_[slot] = next;
    }
    node = next;
    ++depth;
    ++counts_[std::size_t(node)];
    if (counts_[std::size_t(node)] >= 2 && depth > deepest_shared_) deepest_shared_ = depth;
  }
  return std::uint64_t(counts_[std::size_t(node)]) - 1;
}

namespace {

std::size_t lcp_over_plusminus(const WordTuple& h) {
  PrefixTrie trie(2 * h.rank);
  constexpr auto no_limit = std::numeric_limits<std::size_t>::max();
  for (const auto& w : h.words) {
    trie.insert(w.letters(), no_limit);
    Word inv = inverse(w);
    trie.insert(inv.letters(), no_limit);
  }
  return trie.deepest_shared();
}

}  // namespace

TupleStats stats(const WordTuple& h) {
  if (h.words.empty()) throw std::invalid_argument("stats of an empty tuple");
  TupleStats s;
  s.nbr = h.words.size();
  s.min_len = h.words.front().length();
  s.max_len = h.words.front().length();
  for (const auto& w : h.words) {
    s.min_len = std::min(s.min_len, w.length());
    s.max_len = std::max(s.max_len, w.length());
  }
  s.lcp = lcp_over_plusminus(h);
  return s;
}

bool has_central_tree_property(const WordTuple& h) {
  TupleStats s = stats(h);
  return 2 * s.lcp < s.min_len;
}

bool lcp_below(const WordTuple& h, std::size_t bound) {
  return lcp_over_plusminus(h) <= bound;
}

std::vector<std::int32_t> suffix_array(std::span<const std::int32_t> text) {
  const int n = int(text.size());
  if (n == 0) return {};
  std::vector<std::int32_t> sa(text.size()), rank(text.size()), aux(text.size());
  const int alpha = 1 + *std::max_element(text.begin(), text.end());
  const int buckets = std::max(n, alpha) + 1;
  std::vector<std::int32_t> count(std::size_t(buckets), 0);

  // aux holds the current order, sa the destination of the counting sort.
  auto counting_sort = [&](auto key) {
    std::fill(count.begin(), count.end(), 0);
    for (int i : aux) count[std::size_t(key(i)) + 1] += 1;
    for (int i = 1; i < buckets; ++i) count[std::size_t(i)] += count[std::size_t(i - 1)];
    for (int i : aux) sa[std::size_t(count[std::size_t(key(i))]++)] = i;
  };

  std::iota(aux.begin(), aux.end(), 0);
  counting_sort([&](int i) { return text[std::size_t(i)]; });
  int current = 0;
  rank[std::size_t(sa[0])] = 0;
  for (int i = 1; i < n; ++i) {
    current += (text[std::size_t(sa[std::size_t(i - 1)])] != text[std::size_t(sa[std::size_t(i)])]);
    rank[std::size_t(sa[std::size_t(i)])] = current;
  }

  for (int length = 1; current != n - 1; length *= 2) {
    for (int i = 0; i < n; ++i) {
      aux[std::size_t(i)] = sa[std::size_t(i)] - length;
      if (aux[std::size_t(i)] < 0) aux[std::size_t(i)] += n;
    }
    counting_sort([&](int i) { return rank[std::size_t(i)]; });

    auto tail_rank = [&](int i) { return i + length < n ? rank[std::size_t(i + length)] : -1; };
    std::vector<std::int32_t> next_rank(text.size());
    current = 0;
    next_rank[std::size_t(sa[0])] = 0;
    for (int i = 1; i < n; ++i) {
      const int a = sa[std::size_t(i - 1)], b = sa[std::size_t(i)];
      current += (rank[std::size_t(a)] != rank[std::size_t(b)]) || (tail_rank(a) != tail_rank(b));
      next_rank[std::size_t(b)] = current;
    }
    rank = std::move(next_rank);
  }
  return sa;
}

std::vector<std::int32_t> lcp_array(std::span<const std::int32_t> text,
                                    std::span<const std::int32_t> sa) {
  const int n = int(text.size());
  std::vector<std::int32_t> rank(text.size()), lcp(text.size(), 0);
  for (int i = 0; i < n; ++i) rank[std::size_t(sa[std::size_t(i)])] = i;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    if (rank[std::size_t(i)] == 0) {
      k = 0;
      continue;
    }
    const int j = sa[std::size_t(rank[std::size_t(i)] - 1)];
    while (i + k < n && j + k < n && text[std::size_t(i + k)] == text[std::size_t(j + k)]) ++k;
    lcp[std::size_t(rank[std::size_t(i)])] = k;
    if (k > 0) --k;
  }
  return lcp;
}

std::size_t longest_repeated_factor(const WordTuple& h) {
  if (h.words.empty()) throw std::invalid_argument("longest_repeated_factor of an empty tuple");
  // Concatenate the entries of h^+- with unique separators so factors cannot
  // span entries; the answer is then the max adjacent LCP of the suffix array.
  const auto k2 = std::int32_t(2 * h.words.size());
  std::vector<std::int32_t> text;
  std::size_t total = 0;
  for (const auto& w : h.words) total += 2 * w.length() + 2;
  text.reserve(total);
  std::int32_t sep = 0;
  for (const auto& w : h.words) {
    for (Letter x : w.letters()) text.push_back(k2 + x);
    text.push_back(sep++);
    Word inv = inverse(w);
    for (Letter x : inv.letters()) text.push_back(k2 + x);
    text.push_back(sep++);
  }
  auto sa = suffix_array(text);
  auto lcp = lcp_array(text, sa);
  std::int32_t best = 0;
  for (std::int32_t v : lcp) best = std::max(best, v);
  return std::size_t(best);
}

Certificate malnormality_certificate(const WordTuple& h) {
  TupleStats s = stats(h);
  if (3 * s.lcp >= s.min_len) return Certificate::inconclusive;
  const std::size_t threshold = (s.min_len - 3 * s.lcp) / 2;
  if (longest_repeated_factor(h) < threshold) return Certificate::certified;
  return Certificate::inconclusive;
}

WordTuple parse_tuple_text(std::string_view text, std::optional<int> rank) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') lines.push_back(line);
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  if (lines.empty()) throw std::invalid_argument("tuple file contains no words");

  int r = rank.value_or(0);
  if (!rank.has_value()) {
    for (auto line : lines)
      for (char c : line) {
        if (c >= 'a' && c <= 'z') r = std::max(r, c - 'a' + 1);
        else if (c >= 'A' && c <= 'Z') r = std::max(r, c - 'A' + 1);
      }
    r = std::max(r, 1);
  }
  Alphabet a(r);
  std::vector<Word> words;
  words.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Word w = Word::parse(a, lines[i]);
    if (w.empty())
      throw std::invalid_argument("word " + std::to_string(i + 1) +
                                  " reduces to the empty word");
    words.push_back(std::move(w));
  }
  return WordTuple::make(a, std::move(words));
}

std::string to_tuple_text(const WordTuple& h) {
  std::string out;
  for (const auto& w : h.words) {
    out += to_string(w);
    out += '\n';
  }
  return out;
}

}  // namespace fgen
