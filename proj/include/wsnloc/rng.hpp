#pragma once

#include <cstdint>
#include <random>

namespace wsnloc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer, used to decorrelate seed material before it reaches
// the engine and to derive independent sub-streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combination of seed components: mix_seed(a, b) != mix_seed(b, a).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a + 0x632be59bd9b4e019ULL * splitmix64(b));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Canonical key for an unordered node pair; keeps per-link RNG streams
// independent of link enumeration order.
inline std::uint64_t pair_key(int i, int j) {
  const std::uint64_t lo = static_cast<std::uint64_t>(i < j ? i : j);
  const std::uint64_t hi = static_cast<std::uint64_t>(i < j ? j : i);
  return (lo << 32) | hi;
}

}  // namespace wsnloc
