#pragma once

#include <cstdint>
#include <random>

namespace geomean {

using Rng = std::mt19937_64;

/// Independent generator for trial `index` of a run seeded with `seed`.
/// Trials seeded this way can be evaluated in any order or concurrently and
/// still reproduce bit-for-bit.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace geomean
