#pragma once

#include <cmath>
#include <cstdint>

namespace rids {

// splitmix64. Hand-rolled so generated streams are identical across
// platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n > 0; rejection keeps the draw unbiased
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool chance(double p) { return next_unit() < p; }

  // exponential gap between Poisson arrivals at rate events/sec, in microseconds
  double exp_gap_us(double rate_per_s) {
    return -std::log1p(-next_unit()) / rate_per_s * 1e6;
  }

 private:
  uint64_t state_;
};

// Stable sub-stream seeds: generators for independent streams (per station,
// per attack) must not share RNG state or the merge would couple them.
inline uint64_t derive_seed(uint64_t seed, uint64_t salt) {
  Rng r(seed ^ (salt * 0x9e3779b97f4a7c15ull));
  return r.next_u64();
}

}  // namespace rids
