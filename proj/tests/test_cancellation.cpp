#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fgen/cancellation.hpp>
#include <fgen/rng.hpp>

using namespace fgen;

namespace {

WordTuple tup(std::initializer_list<const char*> ws, int rank) {
  Alphabet a(rank);
  std::vector<Word> words;
  for (auto* s : ws) words.push_back(Word::parse(a, s));
  return WordTuple::make(a, std::move(words));
}

Word random_cyclically_reduced(Rng& rng, const Alphabet& a, std::size_t len) {
  while (true) {
    std::vector<Letter> ls;
    while (ls.size() < len) {
      auto x = Letter(uniform_below(rng, a.num_letters()));
      if (!ls.empty() && x == inverse_letter(ls.back())) continue;
      ls.push_back(x);
    }
    Word w = Word::from_reduced(a, std::move(ls));
    if (is_cyclically_reduced(w)) return w;
  }
}

WordTuple random_cyclic_tuple(Rng& rng, const Alphabet& a, std::size_t k, std::size_t max_len) {
  std::vector<Word> ws;
  for (std::size_t i = 0; i < k; ++i)
    ws.push_back(random_cyclically_reduced(rng, a, 1 + uniform_below(rng, max_len)));
  return WordTuple::make(a, std::move(ws));
}

std::size_t max_piece(const WordTuple& h) {
  std::size_t best = 0;
  for (const auto& rp : max_piece_per_rotation(h)) best = std::max(best, rp.piece);
  return best;
}

}  // namespace

TEST_CASE("lambda parsing and validation") {
  auto l = Lambda::parse("1/6");
  CHECK(l.p == 1);
  CHECK(l.q == 6);
  CHECK(l.str() == "1/6");
  CHECK_THROWS_AS(Lambda::parse("6/1"), std::invalid_argument);
  CHECK_THROWS_AS(Lambda::parse("0/3"), std::invalid_argument);
  CHECK_THROWS_AS(Lambda::parse("x"), std::invalid_argument);
  CHECK(Lambda(1, 6) <= Lambda(1, 3));
}

TEST_CASE("commutator pieces: all 8 rotations have max piece 1") {
  auto pieces = max_piece_per_rotation(tup({"abAB"}, 2));
  REQUIRE(pieces.size() == 8);
  for (const auto& rp : pieces) {
    CHECK(rp.word_length == 4);
    CHECK(rp.piece == 1);
  }
}

TEST_CASE("period-2 and proper-power words have full-length pieces") {
  CHECK(max_piece(tup({"abab"}, 2)) == 4);
  CHECK(max_piece(tup({"aaaaaa"}, 2)) == 6);
  CHECK_FALSE(satisfies_cprime(tup({"aaaaaa"}, 2), Lambda(99, 100)));
}

TEST_CASE("commutator C'(lambda) verdicts") {
  CHECK_FALSE(satisfies_cprime(tup({"abAB"}, 2), Lambda(1, 6)));
  CHECK(satisfies_cprime(tup({"abAB"}, 2), Lambda(1, 3)));
  auto v = cprime_violation(tup({"abAB"}, 2), Lambda(1, 6));
  REQUIRE(v.has_value());
  CHECK(v->piece == 1);
}

TEST_CASE("genus-2 relator satisfies C'(1/6)") {
  CHECK(satisfies_cprime(tup({"abABcdCD"}, 4), Lambda(1, 6)));
}

TEST_CASE("single letter word: piece against the inverse rotation only") {
  auto pieces = max_piece_per_rotation(tup({"a"}, 2));
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].piece == 0);
  CHECK(pieces[1].piece == 0);
  CHECK(satisfies_cprime(tup({"a"}, 2), Lambda(1, 6)));
}

TEST_CASE("piece computation requires cyclically reduced words") {
  CHECK_THROWS_AS(max_piece_per_rotation(tup({"abA"}, 2)), std::invalid_argument);
}

TEST_CASE("fast path equals the naive oracle on random tuples") {
  Rng rng(10001);
  for (int it = 0; it < 500; ++it) {
    Alphabet a(1 + int(uniform_below(rng, 3)));
    auto h = random_cyclic_tuple(rng, a, 1 + uniform_below(rng, 5), 30);
    auto fast = max_piece_per_rotation(h);
    auto naive = pieces_naive(h);
    REQUIRE(fast.size() == naive.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i].slot == naive[i].slot);
      CHECK(fast[i].piece == naive[i].piece);
      CHECK(fast[i].word_length == naive[i].word_length);
    }
  }
}

TEST_CASE("naive oracle rotation cap") {
  Rng rng(10002);
  Alphabet a(2);
  auto h = random_cyclic_tuple(rng, a, 3, 20);
  CHECK_THROWS_AS(pieces_naive(h, 4), ResourceLimitError);
}

TEST_CASE("C'(lambda) is antitone in the threshold") {
  Rng rng(10003);
  Alphabet a(2);
  const Lambda lo(1, 6), hi(1, 3);
  for (int it = 0; it < 200; ++it) {
    auto h = random_cyclic_tuple(rng, a, 1 + uniform_below(rng, 4), 25);
    if (satisfies_cprime(h, lo)) CHECK(satisfies_cprime(h, hi));
  }
}

TEST_CASE("C'(lambda) is invariant under permutation, inversion and rotation of entries") {
  Rng rng(10004);
  Alphabet a(2);
  const Lambda lambda(1, 4);
  for (int it = 0; it < 100; ++it) {
    auto h = random_cyclic_tuple(rng, a, 2 + uniform_below(rng, 3), 15);
    const bool base = satisfies_cprime(h, lambda);

    auto perm = h;
    std::shuffle(perm.words.begin(), perm.words.end(), rng);
    CHECK(satisfies_cprime(perm, lambda) == base);

    auto inv = h;
    for (auto& w : inv.words)
      if (uniform_below(rng, 2) == 0) w = inverse(w);
    CHECK(satisfies_cprime(inv, lambda) == base);

    auto rot = h;
    for (auto& w : rot.words) {
      auto rs = rotations(w);
      w = rs[uniform_below(rng, rs.size())];
    }
    CHECK(satisfies_cprime(rot, lambda) == base);
  }
}

TEST_CASE("C'(lambda) is inherited by sub-tuples") {
  Rng rng(10005);
  Alphabet a(2);
  const Lambda lambda(1, 3);
  int done = 0;
  while (done < 100) {
    auto h = random_cyclic_tuple(rng, a, 2 + uniform_below(rng, 3), 20);
    if (!satisfies_cprime(h, lambda)) continue;
    ++done;
    std::vector<Word> sub;
    for (const auto& w : h.words)
      if (uniform_below(rng, 2) == 0) sub.push_back(w);
    if (sub.empty()) sub.push_back(h.words.front());
    CHECK(satisfies_cprime(WordTuple::make(a, std::move(sub)), lambda));
  }
}
