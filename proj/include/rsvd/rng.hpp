#ifndef RSVD_RNG_HPP
#define RSVD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace rsvd {

/// Seeded random source. mt19937_64 output is fixed by the standard; the
/// derived draws below avoid std distributions so streams are identical on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [-1, 1).
  double uniform_pm1() { return uniform01() * 2.0 - 1.0; }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal() {
    double u = 0.0;
    while (u == 0.0) u = uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rsvd

#endif
