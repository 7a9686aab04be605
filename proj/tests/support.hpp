#pragma once

#include <cmath>
#include <cstdint>

#include "esav/initial_conditions.hpp"
#include "esav/spectral.hpp"

namespace esav::testing {

inline Field random_field(const Grid& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return uniform_field(g, rng);
}

// random field with the Nyquist row and column removed
inline Field smooth_field(const Grid& g, std::uint64_t seed) {
  Fourier fft(g);
  const double kx_max = std::numbers::pi * g.nx / g.lx;
  const double ky_max = std::numbers::pi * g.ny / g.ly;
  auto mask = Multiplier::from_function(g, [&](double kx, double ky) {
    return (std::abs(kx) < kx_max - 1e-9 && std::abs(ky) < ky_max - 1e-9) ? 1.0 : 0.0;
  });
  return apply_multiplier(fft, mask, random_field(g, seed));
}

// band-limited to |k|_inf <= kmax, amplitude ~ 1
inline Field low_mode_field(const Grid& g, std::uint64_t seed, int kmax = 4) {
  SplitMix64 rng(seed);
  Field f = g.zeros();
  for (int p = 0; p <= kmax; ++p)
    for (int q = -kmax; q <= kmax; ++q) {
      const double a = 0.1 * rng.uniform(), b = 0.1 * rng.uniform();
      const double kx = 2 * std::numbers::pi * p / g.lx, ky = 2 * std::numbers::pi * q / g.ly;
      f += g.sample([&](double x, double y) { return a * std::cos(kx * x + ky * y) + b * std::sin(kx * x + ky * y); });
    }
  return f;
}

inline double max_abs(const Field& f) { return f.abs().maxCoeff(); }

}  // namespace esav::testing
