#pragma once

#include <cstdint>

namespace percchem {

// All randomness in the project is counter-based: a draw is a pure function
// of (seed, counter), so draws can be evaluated in any order, in parallel,
// and are reproducible bit-for-bit.  The mixer is the SplitMix64 finalizer.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform double in [0,1): top 53 bits of the mixed word over 2^53.
// Never returns 1.0, so "u < p" is an exact Bernoulli(p) for p in [0,1]
// up to the 2^-53 grid, with the monotone coupling open(p) <= open(q)
// for p <= q at fixed (seed, counter).
constexpr double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t w = mix64(mix64(seed) ^ counter);
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Derive an independent stream key, for auxiliary draws (tie-breaking,
// site states) that must not collide with the edge stream.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed ^ mix64(tag));
}

}  // namespace percchem
