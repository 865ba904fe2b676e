#pragma once

#include <cstdint>

namespace ge {

/** Deterministic 64-bit RNG (splitmix64). We use our own generator instead of
 *  <random> engines so that streams are reproducible across standard library
 *  implementations, which is part of the report-determinism contract. */
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /** Uniform real in [0, 1). */
  double u01() { return (next() >> 11) * 0x1.0p-53; }

  /** Uniform integer in {0, ..., n-1}, n >= 1. Rejection-free is not needed;
   *  we use rejection sampling to avoid modulo bias. */
  int uniform_int(int n) {
    uint64_t bound = ~uint64_t(0) - ~uint64_t(0) % uint64_t(n);
    uint64_t x;
    do {
      x = next();
    } while (x >= bound);
    return int(x % uint64_t(n));
  }
};

/** Derives a substream seed from (seed, tag). Documented recipe: one splitmix64
 *  step applied to seed XOR a fixed odd multiple of the tag. Substreams for
 *  (trial, vertex) style indexing are derived by chaining: mix(mix(seed, trial), vertex).
 *  This makes per-trial and per-vertex sampling order-independent. */
inline uint64_t mix(uint64_t seed, uint64_t tag) {
  uint64_t z = seed ^ (tag * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ge
