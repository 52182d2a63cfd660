#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace gsrc {

// splitmix64 finalizer; spreads nearby seeds across the full 64-bit space.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Splittable seed derivation: (base, stream) pairs map to well-separated
// seeds, so per-episode generators are independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(~stream));
}

// Deterministic generator. Transforms are hand-rolled on top of the raw
// 64-bit stream so sampled values are identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unit-mean exponential; -log1p keeps precision near zero.
  double exponential() { return -std::log1p(-uniform01()); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  int uniform_int(int n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<int>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gsrc
