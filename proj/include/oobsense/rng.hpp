// rng.hpp -- deterministic random substreams
//
// Every random draw in the library is keyed by (seed, tag, index...) so that a
// result never depends on evaluation order, worker count, or on which other
// draws happened before it. Paired simulation runs rely on this to see the
// same activity trace and the same detector coin flips.
#pragma once

#include <cstdint>
#include <initializer_list>

namespace oobsense::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mixes a seed with any number of integer keys into a 64-bit substream seed.
inline constexpr std::uint64_t substream(std::uint64_t seed,
                                         std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform double in the open interval (0, 1) from 53 high bits of a hash.
inline constexpr double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Stateless uniform draw keyed by (seed, keys...).
inline constexpr double uniform(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> keys) {
  return to_unit_open(splitmix64(substream(seed, keys)));
}

// Tags that keep the simulator's substreams disjoint.
enum class Stream : std::uint64_t {
  activity = 1,
  fast_sense = 2,
  fine_sense = 3,
  scan_sense = 4,
  scan_noise = 5,
  probe_sense = 6,
  detector_trial = 7,
};

inline constexpr std::uint64_t key(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace oobsense::rng
