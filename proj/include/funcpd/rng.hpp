#pragma once

// Seed derivation for reproducible parallel computation. Every random
// consumer (bootstrap replicate, simulation study, ...) gets its own
// engine seeded from (master seed, purpose, index), so results do not
// depend on scheduling or worker count.

#include <cstdint>
#include <random>

namespace funcpd {

// Purpose tags keep independently derived streams from colliding when
// they share an index.
enum class StreamPurpose : std::uint64_t {
  multiplier_draw = 1,
  sim_innovation = 2,
  mc_study_sim = 3,
  mc_study_boot = 4,
  fuzz = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose,
                                 std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ index);
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t master, StreamPurpose purpose,
                                   std::uint64_t index) {
  return std::mt19937_64(derive_seed(master, purpose, index));
}

}  // namespace funcpd
