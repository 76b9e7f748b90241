#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace cfp {

inline constexpr std::uint64_t kDefaultSeed = 17;

/// Seeded random source with hand-rolled draws.  Only the mt19937_64 bit
/// stream is taken from the standard library; the mappings to doubles and
/// ranges are fixed here so that outputs are identical across platforms and
/// standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) {
      throw std::invalid_argument("Rng::uniform: empty range");
    }
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n) by rejection, so the distribution is exact.
  int uniform_int(int n) {
    if (n <= 0) {
      throw std::invalid_argument("Rng::uniform_int: empty range");
    }
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cfp
