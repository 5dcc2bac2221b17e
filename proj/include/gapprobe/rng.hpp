#pragma once

#include <cstdint>
#include <random>

namespace gapprobe {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-replica stream seed: seed XOR splitmix(index). Streams depend only on
// (seed, index), so results do not depend on scheduling or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return seed ^ splitmix64(index);
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t index) {
  return Engine(derive_seed(seed, index));
}

}  // namespace gapprobe
