#pragma once

#include <cmath>
#include <cstdint>

namespace xgraph {

// SplitMix64 generator: the k-th output is a bijective mix of
// seed + k*golden, so the stream is a pure function of (seed, stream,
// counter) and reproduces bit-identically across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs and caches the second.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Standard Pareto on (1, inf): P(X > x) = 1/x.
  double pareto() { return 1.0 / uniform01(); }

  // Standard Frechet: P(X <= x) = exp(-1/x).
  double frechet() { return -1.0 / std::log(uniform01()); }

  double exponential() { return -std::log(uniform01()); }

  // Uniform integer in {0, ..., n-1} by rejection-free scaling (n small).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace xgraph
