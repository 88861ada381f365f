#pragma once

#include <cstdint>

namespace sector {

/// SplitMix64 (Steele, Lea, Flood). Small, fast and bit-reproducible on every
/// platform, unlike the standard distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Stateless mix of a 64-bit value; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t v) { return SplitMix64(v).next(); }

}  // namespace sector
