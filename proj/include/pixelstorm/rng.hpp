#ifndef PIXELSTORM_RNG_HPP
#define PIXELSTORM_RNG_HPP

#include <cstdint>
#include <random>

namespace pixelstorm {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the `stream`-th independent run derived from a base seed.
/// Used for per-image seeds in campaigns and for the second stage of chained attacks.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace pixelstorm

#endif  // PIXELSTORM_RNG_HPP
