#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlos {

// Deterministic random stream. mt19937_64 output is pinned by the standard;
// distributions are not, so all sampling here is hand-rolled on top of raw
// 64-bit draws and reproduces bit-identically across platforms and runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 finalizer; mixes a stream id into a base seed.
inline uint64_t mix_seed(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for one (level, frame) work item, decorrelated from neighbours.
inline uint64_t derive_seed(uint64_t base, uint64_t level_index, uint64_t frame_index) {
  uint64_t s = mix_seed(base ^ 0x6c62272e07bb0142ULL);
  s = mix_seed(s ^ level_index);
  s = mix_seed(s ^ (frame_index * 0x100000001b3ULL));
  return s;
}

// Exact Poisson draw with the given mean. Knuth's product method for chunks
// of at most 16; larger means are peeled into chunks and the draws summed
// (a sum of independent Poissons is Poisson), which stays exact without any
// normal approximation.
inline long poisson_sample(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  long total = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    const double chunk = remaining > 16.0 ? 16.0 : remaining;
    remaining -= chunk;
    const double limit = std::exp(-chunk);
    long k = 0;
    double prod = rng.uniform01();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform01();
    }
    total += k;
  }
  return total;
}

}  // namespace nlos
