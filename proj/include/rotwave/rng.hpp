// Seeded random number generation. Every random draw in the project flows
// through SplitMix64 so that results are reproducible across platforms and
// independent of evaluation order (streams can be keyed by content).
#pragma once

#include <cstdint>

namespace rotwave {

// SplitMix64 (Steele/Lea/Flood). State advances by the golden-gamma constant.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [a,b).
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Uniform integer in [0,n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  // Derive an independent stream keyed by (seed, key...) without consuming
  // state; used so per-item draws do not depend on enumeration order.
  static uint64_t mix(uint64_t a, uint64_t b) {
    SplitMix64 g(a ^ (0x9E3779B97F4A7C15ull + (b << 1)));
    g.next_u64();
    return g.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace rotwave
