#pragma once

#include <cstdint>
#include <random>

namespace trailscan {

using Rng = std::mt19937_64;

// splitmix64 finalizer; full-period mixing of the trial counter keeps
// per-trial streams decorrelated and independent of thread scheduling.
inline uint64_t seed_derive(uint64_t master_seed, uint64_t trial_index) {
  uint64_t z = master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(uint64_t seed) { return Rng(seed); }

}  // namespace trailscan
