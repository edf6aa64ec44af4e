#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fgen/presentations.hpp>
#include <fgen/rng.hpp>

using namespace fgen;

namespace {

WordTuple tup(std::initializer_list<const char*> ws, int rank) {
  Alphabet a(rank);
  std::vector<Word> words;
  for (auto* s : ws) words.push_back(Word::parse(a, s));
  return WordTuple::make(a, std::move(words));
}

IntMatrix random_matrix(Rng& rng, std::size_t m, std::size_t n, int span) {
  IntMatrix a(m, std::vector<BigInt>(n));
  for (auto& row : a)
    for (auto& v : row) v = BigInt(int(uniform_below(rng, std::uint64_t(2 * span + 1))) - span);
  return a;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t m = a.size(), k = b.size(), n = b.empty() ? 0 : b[0].size();
  IntMatrix c(m, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][t] * b[t][j];
  return c;
}

}  // namespace

TEST_CASE("exponent matrix") {
  auto m = exponent_matrix(tup({"abAB"}, 2));
  CHECK(m == IntMatrix{{0, 0}});
  CHECK(exponent_matrix(tup({"aa", "b"}, 2)) == IntMatrix{{2, 0}, {0, 1}});
  CHECK(exponent_matrix(tup({"aBa"}, 2)) == IntMatrix{{2, -1}});
}

TEST_CASE("abelianization worked examples") {
  auto trivial = abelianization(tup({"a", "b"}, 2));
  CHECK(trivial.free_rank == 0);
  CHECK(trivial.invariant_factors.empty());
  CHECK(trivial.str() == "trivial");

  auto z2 = abelianization(tup({"aa", "b"}, 2));
  CHECK(z2.free_rank == 0);
  REQUIRE(z2.invariant_factors.size() == 1);
  CHECK(z2.invariant_factors[0] == 2);
  CHECK(z2.str() == "Z/2");

  auto zz = abelianization(tup({"abAB"}, 2));
  CHECK(zz.free_rank == 2);
  CHECK(zz.invariant_factors.empty());
  CHECK(zz.str() == "Z^2");
}

TEST_CASE("smith normal form reconstructs with unimodular transforms") {
  Rng rng(12001);
  for (int it = 0; it < 150; ++it) {
    const std::size_t m = 1 + uniform_below(rng, 5), n = 1 + uniform_below(rng, 5);
    auto a = random_matrix(rng, m, n, 9);
    auto s = smith_normal_form(a);
    CHECK(matmul(matmul(s.u, a), s.v) == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    // Diagonal, nonnegative, divisibility chain.
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) CHECK(s.d[i][j] == 0);
    for (std::size_t t = 0; t + 1 < std::min(m, n); ++t) {
      CHECK(s.d[t][t] >= 0);
      if (s.d[t + 1][t + 1] != 0) {
        CHECK(s.d[t][t] != 0);
        CHECK(s.d[t + 1][t + 1] % s.d[t][t] == 0);
      }
    }
  }
}

TEST_CASE("incremental row folding matches batch smith normal form") {
  Rng rng(12002);
  for (int it = 0; it < 150; ++it) {
    const std::size_t cols = 1 + uniform_below(rng, 4);
    const std::size_t rows = 1 + uniform_below(rng, 8);
    auto a = random_matrix(rng, rows, cols, 6);
    RowFolder folder(cols);
    for (const auto& row : a) folder.add_row(row);
    CHECK(abelianization_of_rows(cols, folder.rows()) == abelianization_of_rows(cols, a));
  }
}

TEST_CASE("parity law for uniform relators") {
  auto a = uniform_automaton(2);
  Rng rng(12003);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 1 + uniform_below(rng, 30);
    Word w = sample_reduced(a, n, rng);
    auto m = exponent_matrix(WordTuple{2, {w}});
    BigInt sum = m[0][0] + m[0][1];
    CHECK((sum % 2 + 2) % 2 == BigInt(n % 2));
  }
}

TEST_CASE("degenerate class check") {
  DegenerateLetterSets uniform_sets = degenerate_letter_sets(uniform_automaton(2));
  CHECK(uniform_sets.unused_positive_letters == 0);
  CHECK(uniform_sets.has_inverse_pair);

  CHECK(degenerate_class_check(tup({"a", "b"}, 2), uniform_sets) ==
        DegenerateClass::consistent_trivial);
  CHECK(degenerate_class_check(tup({"aa", "b"}, 2), uniform_sets) ==
        DegenerateClass::consistent_z2);
  CHECK(degenerate_class_check(tup({"abAB"}, 2), uniform_sets) == DegenerateClass::other);

  auto quasi_sets = degenerate_letter_sets(psl2_automaton(Psl2Variant::quasigeodesic));
  CHECK(quasi_sets.unused_positive_letters == 0);
  CHECK_FALSE(quasi_sets.has_inverse_pair);
  // Prediction without an inverse pair is the free group F(|D| + 1).
  CHECK(degenerate_class_check(tup({"ab"}, 2), quasi_sets) ==
        DegenerateClass::consistent_trivial);
}

TEST_CASE("collision statistic basics") {
  auto h = tup({"abab", "abba"}, 2);
  auto c2 = collision_statistic(h, 2);
  CHECK(c2.exists);
  CHECK(c2.pairs == 1);
  auto c3 = collision_statistic(h, 3);
  CHECK_FALSE(c3.exists);
  CHECK(c3.pairs == 0);
  CHECK_THROWS_AS(collision_statistic(h, 5), std::invalid_argument);

  // Duplicates: all pairs collide.
  auto dup = tup({"ab", "ab", "ab"}, 2);
  CHECK(collision_statistic(dup, 2).pairs == 3);
}

TEST_CASE("collision statistic agrees with a quadratic scan") {
  Rng rng(12004);
  auto a = uniform_automaton(2);
  for (int it = 0; it < 50; ++it) {
    const std::size_t n = 4 + uniform_below(rng, 6);
    const std::size_t count = 2 + uniform_below(rng, 60);
    std::vector<Word> words;
    for (std::size_t i = 0; i < count; ++i) words.push_back(sample_reduced(a, n, rng));
    WordTuple h{2, words};
    const std::size_t ell = 1 + uniform_below(rng, n);
    auto fast = collision_statistic(h, ell);
    std::uint64_t naive = 0;
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        bool same = true;
        for (std::size_t t = 0; t < ell && same; ++t) same = words[i][t] == words[j][t];
        if (same) ++naive;
      }
    CHECK(fast.pairs == naive);
    CHECK(fast.exists == (naive > 0));
  }
}
