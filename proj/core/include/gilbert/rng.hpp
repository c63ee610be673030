#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gilbert {

/// Every random draw in the library comes from one of these engines.
using Engine = std::mt19937_64;

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a hash of a purpose tag.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of the stream (master, index, tag). Streams are a pure function of the
/// triple, so replicate k sees the same numbers whatever thread runs it and in
/// whatever order replicates are scheduled.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index,
                                    std::string_view tag) noexcept {
  return mix64(mix64(mix64(master) ^ tag_hash(tag)) + index);
}

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace gilbert
