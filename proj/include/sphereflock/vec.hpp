#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sphereflock {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

/// Distance between two points of the unit sphere together with its
/// complement 2 - distance.
///
/// Near antipodal pairs the distance rounds to 2 and the complement loses all
/// relative precision if formed by subtraction. Weights vanish at distance 2,
/// so they are evaluated from the complement, which is computed here through
/// 2 - |x - y| = |x + y|^2 / (2 + |x - y|).
struct Separation {
  double distance = 0.0;
  double complement = 2.0;

  static Separation of(const Vec3& x, const Vec3& y) {
    const double d = (x - y).norm();
    if (d <= 1.0) return {d, 2.0 - d};
    const double s2 = (x + y).squaredNorm();
    return {d, s2 / (2.0 + d)};
  }

  static Separation from_distance(double d) { return {d, 2.0 - d}; }
};

}  // namespace sphereflock
