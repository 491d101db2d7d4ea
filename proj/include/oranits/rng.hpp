#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace oranits {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic substream seed from a root seed and a tuple of indices,
/// e.g. (seed, generation, member).
inline std::uint64_t substream_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(root);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng substream(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  return Rng(substream_seed(root, keys));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace oranits
