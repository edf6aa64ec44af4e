#include <benchmark/benchmark.h>

#include <fgen/cancellation.hpp>
#include <fgen/markov.hpp>
#include <fgen/presentations.hpp>
#include <fgen/rng.hpp>
#include <fgen/stallings.hpp>
#include <fgen/tuples.hpp>

using namespace fgen;

namespace {

WordTuple random_tuple(std::uint64_t seed, std::size_t count, std::size_t len, bool cyclic) {
  auto a = uniform_automaton(2);
  Rng rng(seed);
  std::vector<Word> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    words.push_back(cyclic ? sample_cyclically_reduced(a, len, rng)
                           : sample_reduced(a, len, rng));
  return WordTuple{2, std::move(words)};
}

void BM_sample_reduced(benchmark::State& state) {
  auto a = uniform_automaton(2);
  Rng rng(1);
  const auto n = std::size_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_reduced(a, n, rng));
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}
BENCHMARK(BM_sample_reduced)->Arg(64)->Arg(1024);

void BM_tuple_stats(benchmark::State& state) {
  auto h = random_tuple(2, std::size_t(state.range(0)), 25, false);
  for (auto _ : state) benchmark::DoNotOptimize(stats(h));
}
BENCHMARK(BM_tuple_stats)->Arg(1000)->Arg(10000)->Arg(60000);

void BM_stallings_fold(benchmark::State& state) {
  auto h = random_tuple(3, std::size_t(state.range(0)), 25, false);
  for (auto _ : state) benchmark::DoNotOptimize(stallings_graph(h));
}
BENCHMARK(BM_stallings_fold)->Arg(10)->Arg(100)->Arg(1000);

void BM_piece_computation(benchmark::State& state) {
  auto h = random_tuple(4, std::size_t(state.range(0)), 32, true);
  for (auto _ : state) benchmark::DoNotOptimize(max_piece_per_rotation(h));
}
BENCHMARK(BM_piece_computation)->Arg(100)->Arg(1000)->Arg(6561);

void BM_longest_repeated_factor(benchmark::State& state) {
  auto h = random_tuple(5, std::size_t(state.range(0)), 64, false);
  for (auto _ : state) benchmark::DoNotOptimize(longest_repeated_factor(h));
}
BENCHMARK(BM_longest_repeated_factor)->Arg(50)->Arg(500);

void BM_spectral_summary(benchmark::State& state) {
  auto a = uniform_automaton(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_summary(a));
}
BENCHMARK(BM_spectral_summary)->Arg(2)->Arg(4)->Arg(8);

void BM_abelianization(benchmark::State& state) {
  auto h = random_tuple(6, std::size_t(state.range(0)), 20, true);
  for (auto _ : state) benchmark::DoNotOptimize(abelianization(h));
}
BENCHMARK(BM_abelianization)->Arg(1000)->Arg(100000);

void BM_collision_trie(benchmark::State& state) {
  auto h = random_tuple(7, std::size_t(state.range(0)), 40, false);
  for (auto _ : state) benchmark::DoNotOptimize(collision_statistic(h, 20));
}
BENCHMARK(BM_collision_trie)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
