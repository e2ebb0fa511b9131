#pragma once

#include <random>
#include <utility>
#include <vector>

#include "sphereflock/vec.hpp"

namespace testing_support {

using sphereflock::Vec3;

inline Vec3 gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double a = g(rng);
  const double b = g(rng);
  const double c = g(rng);
  return {a, b, c};
}

inline Vec3 unit(std::mt19937_64& rng) { return gaussian(rng).normalized(); }

/// Seeded unit pairs kept away from the antipodal cutoff.
inline std::vector<std::pair<Vec3, Vec3>> unit_pairs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vec3, Vec3>> out;
  while (out.size() < count) {
    const Vec3 a = unit(rng), b = unit(rng);
    if ((a + b).norm() > 1e-6) out.emplace_back(a, b);
  }
  return out;
}

/// Great circle in the plane of a and b: unit vector at angle s from a.
inline Vec3 along(const Vec3& a, const Vec3& b, double s) {
  const Vec3 e = (b - a.dot(b) * a).normalized();
  return std::cos(s) * a + std::sin(s) * e;
}

}  // namespace testing_support
