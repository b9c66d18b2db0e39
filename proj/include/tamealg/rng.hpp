#pragma once

#include <cstdint>

namespace tamealg {

// SplitMix64. The byte protocol is fixed so that seeded runs reproduce
// bit-for-bit on any platform: the state advances by the 64-bit golden
// gamma 0x9E3779B97F4A7C15 and each output is the finalizer
//   z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31
// applied to the advanced state. Bounded draws use rejection sampling on
// the top range so they are exactly uniform.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform draw from [0, bound); bound >= 1
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
    for (;;) {
      uint64_t u = next();
      if (u >= threshold) return u % bound;
    }
  }

  static uint64_t scramble(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

private:
  uint64_t state_;
};

// Deterministic sub-stream derivation: worker or sample `index` under a run
// `seed` gets its own independent SplitMix64 stream. Used by the census and
// verification fan-outs so results do not depend on the worker count.
inline uint64_t derive_subseed(uint64_t seed, uint64_t index) {
  return SplitMix64::scramble(seed ^ SplitMix64::scramble(index + 0x632BE59BD9B4E019ull));
}

} // namespace tamealg
