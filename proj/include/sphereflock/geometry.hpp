#pragma once

#include <cmath>
#include <string>

#include "sphereflock/errors.hpp"
#include "sphereflock/vec.hpp"
#include "sphereflock/weight.hpp"

namespace sphereflock {

struct GeometryTolerances {
  /// |x1 + x2| at or below this is treated as an antipodal pair.
  double antipodal = 1e-8;
  /// |x1 - x2| at or below this uses R = I.
  double coincident = 1e-12;
  /// Accepted deviation of input positions from unit norm.
  double unit = 1e-9;
};

namespace detail {

inline void require_unit(const Vec3& x, double tol, const char* what) {
  if (!is_finite(x)) throw DomainError(std::string(what) + ": non-finite vector");
  if (std::abs(x.norm() - 1.0) > tol) throw DomainError(std::string(what) + ": position is not on the unit sphere");
}

// x1 x x2 written as (x1 + x2) x (x2 - x1) / 2. The two factors are
// orthogonal for unit inputs, so the product has no cancellation even when
// x1 and x2 are nearly equal or nearly antipodal.
inline Vec3 stable_cross(const Vec3& x1, const Vec3& x2) { return 0.5 * (x1 + x2).cross(x2 - x1); }

}  // namespace detail

/// Removes the component of v along the unit vector x.
inline Vec3 tangent_project(const Vec3& x, const Vec3& v) { return v - v.dot(x) * x; }

/// Rotation carrying x1 to x2 about the axis x1 x x2:
///
///   R = <x1,x2> I - x1 x2^T + x2 x1^T + (1 - <x1,x2>) u u^T,  u = x1 x x2 / |x1 x x2|
///
/// Restricted to tangent vectors this is parallel transport along the
/// connecting great circle. Throws AntipodalError when |x1 + x2| is at or
/// below the antipodal cutoff.
inline Mat3 rotation_matrix(const Vec3& x1, const Vec3& x2, const GeometryTolerances& tol = {}) {
  detail::require_unit(x1, tol.unit, "rotation_matrix");
  detail::require_unit(x2, tol.unit, "rotation_matrix");
  if ((x1 + x2).norm() <= tol.antipodal) throw AntipodalError("rotation_matrix: antipodal pair");
  if ((x1 - x2).norm() <= tol.coincident) return Mat3::Identity();

  const double c = x1.dot(x2);
  const Vec3 u = detail::stable_cross(x1, x2).normalized();
  Mat3 r = c * Mat3::Identity();
  r.noalias() -= x1 * x2.transpose();
  r.noalias() += x2 * x1.transpose();
  r.noalias() += (1.0 - c) * (u * u.transpose());
  return r;
}

/// Same rotation in axis-angle form: cos(t) I + sin(t) [u] + (1 - cos(t)) u u^T.
inline Mat3 rotation_matrix_rodrigues(const Vec3& x1, const Vec3& x2, const GeometryTolerances& tol = {}) {
  detail::require_unit(x1, tol.unit, "rotation_matrix_rodrigues");
  detail::require_unit(x2, tol.unit, "rotation_matrix_rodrigues");
  if ((x1 + x2).norm() <= tol.antipodal) throw AntipodalError("rotation_matrix_rodrigues: antipodal pair");
  if ((x1 - x2).norm() <= tol.coincident) return Mat3::Identity();

  const Vec3 w = detail::stable_cross(x1, x2);
  const double theta = std::atan2(w.norm(), x1.dot(x2));
  const Vec3 u = w.normalized();
  Mat3 skew;
  skew << 0.0, -u.z(), u.y(),
          u.z(), 0.0, -u.x(),
          -u.y(), u.x(), 0.0;
  return std::cos(theta) * Mat3::Identity() + std::sin(theta) * skew + (1.0 - std::cos(theta)) * (u * u.transpose());
}

/// R(x1, x2) v.
inline Vec3 rotate(const Vec3& x1, const Vec3& x2, const Vec3& v, const GeometryTolerances& tol = {}) {
  return rotation_matrix(x1, x2, tol) * v;
}

/// psi(|x1 - x2|) R(x2, x1) v, extended by zero at antipodal pairs. This is
/// the transported velocity of an agent at x2 as seen from x1; it is total on
/// the sphere because psi vanishes at distance 2.
template <PairWeight W>
Vec3 weighted_transport(const Vec3& x1, const Vec3& x2, const Vec3& v, const W& psi, const GeometryTolerances& tol = {}) {
  if ((x1 + x2).norm() <= tol.antipodal) {
    detail::require_unit(x1, tol.unit, "weighted_transport");
    detail::require_unit(x2, tol.unit, "weighted_transport");
    return Vec3::Zero();
  }
  return psi(Separation::of(x1, x2)) * (rotation_matrix(x2, x1, tol) * v);
}

}  // namespace sphereflock
