#pragma once

#include <cstdint>

namespace lighttrail {

// SplitMix64: state advances by the golden-gamma constant, output is the
// finalized state. Fixed here so generated traces are reproducible across
// platforms; golden tests compare regenerated traces, never raw streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t v = next();
      if (v >= threshold) return v % bound;
    }
  }

  // Uniform double in (0, 1].
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Stable seed derivation for independent substreams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 rng(seed ^ (salt * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL));
  return rng.next();
}

}  // namespace lighttrail
