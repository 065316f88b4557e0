#pragma once

#include <cstdint>
#include <random>

namespace cgas {

/// Engine used by every sampler. One instance per chain or per task.
using Rng = std::mt19937_64;

/// Seed for independent task `index` of a batch started from `base`.
/// The mapping is fixed, so batch results do not depend on scheduling.
inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline double uniform01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace cgas
