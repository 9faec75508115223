#pragma once

#include <cmath>
#include <cstdint>

namespace gentropy {

/// Counter-based splittable pseudo-random generator.
///
/// State is a (key, counter) pair; the key is derived from (seed, stream)
/// so that every (seed, trial) pair owns an independent stream and parallel
/// trials reproduce serial output bit for bit. Output mixing is the
/// SplitMix64 finalizer (Stafford mix13).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed ^ kGamma) + stream)) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_double_open() { return 1.0 - next_double(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_gaussian() {
    const double u1 = next_double_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gentropy
