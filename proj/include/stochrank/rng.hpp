#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stochrank {

// Counter-based random streams. Every consumer derives its own stream from
// (seed, purpose, a, b), so draws never depend on thread count or on whether
// some other consumer drew first. All draws are reproducible bit-for-bit
// across runs and platforms.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

enum class StreamPurpose : std::uint64_t {
  smoothing_noise = 1,
  langevin_noise = 2,
  estimator_probe = 3,
  data_synthesis = 4,
  fuzz = 5,
};

// Stream key: deterministic function of its four components.
inline std::uint64_t derive_stream(std::uint64_t seed, StreamPurpose purpose,
                                   std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = detail::splitmix64(h ^ a);
  h = detail::splitmix64(h ^ b);
  return h;
}

// splitmix64 sequence with a Box-Muller normal generator on top.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) : state_(stream_key) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform on (0, 1): 53 mantissa bits, offset half a step so 0 is excluded.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace stochrank
