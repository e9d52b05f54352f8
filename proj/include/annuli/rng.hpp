#pragma once

#include <cstdint>

namespace annuli {

// Counter-based generator: output j of stream s under seed k is the pure
// function mix(key(k, s) + j * GAMMA). Because there is no sequential state,
// any partition of the index space reproduces the same per-index draws, which
// is what keeps sharded sampling deterministic.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream) : key_(derive_key(seed, stream)) {}

  uint64_t next_u64() { return mix(key_ + (counter_++) * kGamma); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  static uint64_t derive_key(uint64_t seed, uint64_t stream) {
    return mix(mix(seed ^ 0x7c139c7f8e6ab34bULL) + stream * kGamma);
  }

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace annuli
