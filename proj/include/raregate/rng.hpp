#pragma once

// Deterministic random number generation.
//
// Every seeded operation in this toolkit draws from xoshiro256** initialized
// through splitmix64, exactly as published by Blackman and Vigna
// (prng.di.unimi.it). Both algorithms are reproduced verbatim so that a seed
// written into a report reproduces the same stream on any platform. The
// derivation of per-block streams for bit-parallel simulation is documented
// in docs/formats.md and must not change.

#include <cstdint>

namespace raregate {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

struct Xoshiro256ss {
  std::uint64_t s[4];

  explicit Xoshiro256ss(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s) w = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // Uniform integer in [0, n). Plain modulo: the bias is irrelevant for this
  // tool's purposes and the simple rule is easy to document and replicate.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Domain-separated stream derivation: stream k of a user seed. Used to give
// simulation blocks (and other independent consumers) their own generators so
// results do not depend on how work is partitioned.
inline Xoshiro256ss seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  return Xoshiro256ss(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
}

}  // namespace raregate
