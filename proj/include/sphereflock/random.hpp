#pragma once

#include <cstdint>
#include <random>

#include "sphereflock/vec.hpp"

namespace sphereflock {

using Rng = std::mt19937_64;

/// Isotropic Gaussian 3-vector.
inline Vec3 random_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a = normal(rng);
  const double b = normal(rng);
  const double c = normal(rng);
  return {a, b, c};
}

/// Uniform point on the unit sphere (normalized isotropic Gaussian).
inline Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 g = random_gaussian(rng);
    const double n = g.norm();
    if (n > 1e-12) return g / n;
  }
}

}  // namespace sphereflock
