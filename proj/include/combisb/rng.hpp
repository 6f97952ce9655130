#pragma once

#include <cstdint>
#include <random>

namespace combisb {

using Rng = std::mt19937_64;

enum class StreamPurpose : std::uint64_t { Environment = 1, Policy = 2 };

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for one (seed, purpose) pair. Streams are derived by
// hashing a counter, never by advancing a shared generator.
inline Rng make_stream(std::uint64_t seed, StreamPurpose purpose) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(purpose));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Rng(seq);
}

}  // namespace combisb
