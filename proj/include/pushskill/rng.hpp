#pragma once

// SplitMix64 (Steele, Lea, Flood 2014):
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// uniform01() keeps the top 53 bits: (next() >> 11) * 2^-53, in [0, 1).
// Substreams are keyed by seeding a fresh generator with
// first_output(seed ^ (key * 0x9E3779B97F4A7C15)).

#include <cstdint>

namespace pushskill {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Independent generator for (seed, key).
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t key) {
    SplitMix64 mixer(seed ^ (key * 0x9E3779B97F4A7C15ULL));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace pushskill
