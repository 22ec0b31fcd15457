#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "strata/util.hpp"

namespace strata {

// splitmix64 finalizer; full-period 64-bit mixing.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-unit substream seed: multiply-xor mix of the run seed with a stable
// hash of the unit id and a replicate index. Independent of scheduling.
inline uint64_t derive_seed(uint64_t seed, std::string_view id, uint64_t replicate = 0) {
  return mix64(mix64(seed ^ fnv1a64(id)) ^ replicate);
}

// Small deterministic generator; all randomness in this project flows
// through it so outputs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  // Uniform in [0, n); rejection sampling keeps it unbiased.
  uint64_t uniform(uint64_t n) {
    if (n == 0) throw Error("uniform draw from empty range");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-r, r].
  double uniform_symmetric(double r) { return (2.0 * next_double() - 1.0) * r; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace strata
