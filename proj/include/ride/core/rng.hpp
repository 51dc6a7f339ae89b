#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ride {

// xoshiro256++ with splitmix64 seeding. Self-contained so that streams are
// reproducible across platforms and process runs (std:: distributions are
// implementation-defined).
class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    // Debiased multiply-shift (Lemire).
    uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    uint64_t lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi), matching half-open range generators.
  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo)));
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Marsaglia polar; caches the paired deviate.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mul = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * mul;
    has_cached_ = true;
    return u * mul;
  }

  bool chance(double p) { return uniform() < p; }

  // Derives an independent stream; used to give each env/worker its own rng.
  Rng split(uint64_t salt) {
    uint64_t x = next_u64() ^ (salt * 0x9e3779b97f4a7c15ull);
    return Rng(splitmix64(x));
  }

  static uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Mixes several values into one seed, for deriving per-env/per-episode seeds.
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0) {
  uint64_t x = a;
  Rng::splitmix64(x);
  x ^= b * 0xff51afd7ed558ccdull;
  Rng::splitmix64(x);
  x ^= c * 0xc4ceb9fe1a85ec53ull;
  return Rng::splitmix64(x);
}

}  // namespace ride
