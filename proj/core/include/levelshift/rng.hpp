#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "levelshift/types.hpp"

namespace levelshift {

/// SplitMix64 (Steele, Lea & Flood 2014). Every seeded quantity in the
/// library (random models, solver start vectors, sampling in tests and
/// verification) draws from this stream so results are portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double symmetric() noexcept { return 2.0 * uniform() - 1.0; }

  /// Box-Muller pair from two consecutive uniforms (u1, u2):
  /// r = sqrt(-2 ln(1 - u1)), returns (r cos 2πu2, r sin 2πu2).
  /// Both components are standard normal.
  Complex normal_pair() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

/// Seeded start vector: entries re, im uniform on [-1, 1), then normalized.
inline StateVector random_state(Index dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  StateVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = rng.symmetric();
    const double im = rng.symmetric();
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

}  // namespace levelshift
