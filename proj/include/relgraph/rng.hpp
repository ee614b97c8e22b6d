#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace relgraph {

// SplitMix64 finalizer. Cheap, well-mixed, and easy to reproduce in any
// language, which is what keeps every artifact byte-identical across runs.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, index). Used to give every
// gate / instance / epoch its own counter-based stream so results do not
// depend on evaluation order or thread count.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return mix64(seed ^ mix64(index ^ 0xa5a5a5a5a5a5a5a5ULL));
}

// Minimal deterministic generator. We intentionally avoid <random>
// distributions: their outputs are not pinned across standard library
// implementations, and reproducibility here matters more than raw speed.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Unbiased uniform integer in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
    uint64_t x;
    do {
      x = next();
    } while (x < threshold);
    return x % n;
  }

  // Standard normal deviate via Box-Muller. Each call consumes exactly two
  // uniforms (no cached second deviate) so a stream's output depends only on
  // how many draws preceded it, not on which kinds of draws they were.
  double next_normal() {
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Normal(mean, sigma) truncated to [mean - 3 sigma, mean + 3 sigma] by
  // rejection. sigma == 0 returns mean exactly.
  double next_truncated_normal(double mean, double sigma) {
    if (sigma == 0.0) return mean;
    double z;
    do {
      z = next_normal();
    } while (z < -3.0 || z > 3.0);
    return mean + sigma * z;
  }

 private:
  uint64_t state_;
};

// In-place Fisher-Yates shuffle driven by a SplitMix64 stream.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace relgraph
