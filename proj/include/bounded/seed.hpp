#pragma once

// Splittable seeding: sub-streams are derived from a master seed and an
// index, never by sharing engine state, so parallel consumers stay
// reproducible.

#include <cstdint>

namespace bounded {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace bounded
