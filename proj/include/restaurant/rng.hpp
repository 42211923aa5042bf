#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace restaurant {

/// Random stream used throughout. mt19937_64's output sequence is fixed by the
/// standard, and the helpers below avoid the library-specific distributions, so
/// a seed reproduces the same draws on every toolchain.
using Rng = std::mt19937_64;

/// Named sub-streams derived from one episode seed.
enum class Stream : std::uint64_t {
  InitialState = 1,
  Dynamics = 2,
  Policy = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  return Rng{splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(stream)))};
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

/// Draws an index from a probability vector by inverse CDF. Entries with zero
/// weight are never returned.
inline std::size_t sample_categorical(Rng& rng, std::span<const double> probs) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace restaurant
