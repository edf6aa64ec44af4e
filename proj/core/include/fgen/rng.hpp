#ifndef FGEN_RNG_HPP
#define FGEN_RNG_HPP

#include <cstdint>
#include <random>

namespace fgen {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

/// Substream seed for (master, cell, trial); independent streams by mixing.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t cell,
                                       std::uint64_t trial) noexcept {
  return mix64(mix64(mix64(master) ^ (cell + 0x9e3779b97f4a7c15ull)) ^
               (trial + 0xd1b54a32d192ed03ull));
}

/// Uniform double in [0, 1), identical across platforms for a given engine state.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all
  // our uses, and reproducibility matters more than the 2^-50 bias.
  return rng() % n;
}

}  // namespace fgen

#endif
