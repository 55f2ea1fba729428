#pragma once
#include <cmath>
#include <cstdint>

// Deterministic RNG stack. Everything downstream (engines, samplers, tests)
// draws through these types only -- never std::random distributions, whose
// bit streams are implementation-defined. Same seed => same bytes, portably.

namespace ips {

// SplitMix64 finalizer (Steele/Lea/Vigna constants).
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// k-th output of the SplitMix64 stream seeded with `master`.
// Used as the seed-derivation map: trajectory i samples its initial state
// with derive_seed(master, 2i) and runs dynamics with derive_seed(master, 2i+1).
inline uint64_t derive_seed(uint64_t master, uint64_t k) {
  return mix64(master + (k + 1) * 0x9E3779B97F4A7C15ull);
}

// xoshiro256++ (Blackman/Vigna), seeded through SplitMix64 expansion.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t st = seed;
    for (auto& w : s_) {
      st += 0x9E3779B97F4A7C15ull;
      w = mix64(st);
    }
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  // uniform on (0,1]; safe under log()
  double uniform_pos() { return double((next() >> 11) + 1) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform_pos()); }
  // uniform integer in {0,...,m-1} (m > 0); Lemire-style rejection-free enough
  // for our m << 2^64 via 128-bit multiply
  uint64_t below(uint64_t m) {
    return uint64_t((__uint128_t(next()) * m) >> 64);
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace ips
