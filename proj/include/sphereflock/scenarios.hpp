#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sphereflock/diagnostics.hpp"
#include "sphereflock/ensemble.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/random.hpp"
#include "sphereflock/vec.hpp"

namespace sphereflock {

namespace detail {

// Tangent velocity with isotropic direction and the requested speed.
inline Vec3 random_tangent(Rng& rng, const Vec3& x, double speed) {
  for (;;) {
    const Vec3 t = tangent_project(x, random_gaussian(rng));
    const double n = t.norm();
    if (n > 1e-9) {
      const Vec3 v = (speed / n) * t;
      return tangent_project(x, v);
    }
  }
}

}  // namespace detail

/// Positions uniform on the sphere, isotropic tangent velocities of equal speed.
inline Ensemble random_admissible(std::size_t n, std::uint64_t seed, double speed = 1.0) {
  if (n < 1) throw DomainError("random_admissible needs at least one agent");
  Rng rng(seed);
  Ensemble ens;
  ens.agents.resize(n);
  for (auto& a : ens.agents) a.x = random_unit(rng);
  for (auto& a : ens.agents) a.v = detail::random_tangent(rng, a.x, speed);
  return ens;
}

/// Unit-speed rotation along the equator with phase offsets alpha_i in [0, pi):
///   x_i(t) = (cos(t + a_i), sin(t + a_i), 0),  v_i(t) = (-sin(t + a_i), cos(t + a_i), 0)
/// An exact solution of the flocking system without bonding.
inline Ensemble circular_exact(const std::vector<double>& phases, double t) {
  Ensemble ens;
  ens.t = t;
  for (double alpha : phases) {
    if (!(alpha >= 0.0 && alpha < std::numbers::pi)) throw DomainError("circular phases must lie in [0, pi)");
    const double c = std::cos(t + alpha);
    const double s = std::sin(t + alpha);
    ens.agents.push_back({Vec3(c, s, 0.0), Vec3(-s, c, 0.0)});
  }
  return ens;
}

struct AntipodalApproachState {
  Vec3 x1;
  Vec3 x2;
  Vec3 v1;
};

/// Kinematic path approaching the antipode of the north pole:
///   x1(t) = (t^2 sin(t^-1/2), -t^2 cos(t^-1/2), -sqrt(1 - t^4)),  x2 = (0, 0, 1)
/// with v1 = dx1/dt in closed form. Along it |x1 + x2| ~ t^2 while |v1| ~ sqrt(t)/2,
/// which makes the transport derivative blow up like V / |x1 + x2|.
inline AntipodalApproachState antipodal_approach_state(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("approach path defined for 0 < t < 1");
  const double s = 1.0 / std::sqrt(t);
  const double sn = std::sin(s);
  const double cs = std::cos(s);
  const double t2 = t * t;
  const double root = std::sqrt(1.0 - t2 * t2);
  const double sqrt_t = std::sqrt(t);
  AntipodalApproachState st;
  st.x1 = Vec3(t2 * sn, -t2 * cs, -root);
  st.x2 = Vec3(0.0, 0.0, 1.0);
  st.v1 = Vec3(2.0 * t * sn - 0.5 * sqrt_t * cs, -2.0 * t * cs - 0.5 * sqrt_t * sn, 2.0 * t * t2 / root);
  return st;
}

/// Two-agent trajectory sampled from the approach path on [t_begin, t_end]
/// with the given stride; agent 2 stays at the north pole.
inline Trajectory antipodal_approach_trajectory(double t_begin, double t_end, double stride) {
  if (!(stride > 0.0) || !(t_end >= t_begin)) throw DomainError("bad approach sampling window");
  Trajectory traj;
  traj.params.n = 2;
  traj.params.sigma = 0.0;
  traj.params.dt = stride;
  traj.params.record_every = 1;
  traj.params.t_end = t_end - t_begin;
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_begin) / stride * (1.0 + 1e-12)));
  for (std::size_t k = 0; k <= count; ++k) {
    const double t = t_begin + static_cast<double>(k) * stride;
    const AntipodalApproachState st = antipodal_approach_state(t);
    Ensemble e;
    e.t = t;
    e.agents = {{st.x1, st.v1}, {st.x2, Vec3::Zero()}};
    traj.samples.push_back({e, make_record(e, 0.0, traj.params.weight, traj.params.tol)});
  }
  return traj;
}

/// Positions uniform on the spherical cap of angular radius `radius` around
/// `center`, tangent velocities of the given speed.
inline Ensemble cap_clustered(std::size_t n, const Vec3& center, double radius, std::uint64_t seed,
                              double speed = 0.1) {
  if (n < 1) throw DomainError("cap_clustered needs at least one agent");
  if (!(radius > 0.0 && radius <= std::numbers::pi / 2.0)) throw DomainError("cap radius must lie in (0, pi/2]");
  if (!is_finite(center) || !(center.norm() > 0.0)) throw DomainError("cap center must be a nonzero vector");
  if (!(speed >= 0.0)) throw DomainError("speed must be non-negative");
  const Vec3 c = center.normalized();
  const Vec3 e1 = c.unitOrthogonal();
  const Vec3 e2 = c.cross(e1);

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cos_r = std::cos(radius);
  Ensemble ens;
  ens.agents.resize(n);
  for (auto& a : ens.agents) {
    const double u = unit(rng);
    const double w = unit(rng);
    // Area on a cap is uniform in the cosine of the polar angle.
    const double cos_theta = 1.0 - u * (1.0 - cos_r);
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * std::numbers::pi * w;
    a.x = (cos_theta * c + sin_theta * (std::cos(phi) * e1 + std::sin(phi) * e2)).normalized();
  }
  for (auto& a : ens.agents) a.v = detail::random_tangent(rng, a.x, speed);
  return ens;
}

/// Bonding rate with sigma = factor * N^2 E(0; sigma) / 2. E(0) depends on
/// sigma through the configuration energy, so this solves the linear fixed
/// point sigma = a (E_K + sigma D) with a = factor N^2 / 2 and D = E_C at
/// sigma = 1.
inline double threshold_sigma(const Ensemble& ens, double factor) {
  const double nd = static_cast<double>(ens.size());
  const Energy unit_bond = energy(ens, 1.0);
  const double a = factor * nd * nd / 2.0;
  const double denom = 1.0 - a * unit_bond.configuration;
  if (!(denom > 0.0))
    throw ConfigError("no bonding rate reaches factor " + std::to_string(factor) +
                      " times the flocking threshold for this configuration");
  return a * unit_bond.kinetic / denom;
}

struct ScenarioSpec {
  enum class Kind { random_uniform, cap_clustered, circular_exact, antipodal_approach };

  Kind kind = Kind::random_uniform;
  std::size_t n = 3;
  std::uint64_t seed = 0;
  double speed = 1.0;
  Vec3 center = Vec3::UnitZ();
  double radius = 0.5;
  std::vector<double> phases;
  /// Starting time on the approach path.
  double time = 0.1;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline std::string_view to_string(ScenarioSpec::Kind k) {
  switch (k) {
    case ScenarioSpec::Kind::random_uniform: return "random-uniform";
    case ScenarioSpec::Kind::cap_clustered: return "cap-clustered";
    case ScenarioSpec::Kind::circular_exact: return "circular-exact";
    case ScenarioSpec::Kind::antipodal_approach: return "antipodal-approach";
  }
  return "?";
}

inline ScenarioSpec::Kind scenario_kind_from_string(std::string_view s) {
  using K = ScenarioSpec::Kind;
  for (K k : {K::random_uniform, K::cap_clustered, K::circular_exact, K::antipodal_approach})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown scenario kind '" + std::string(s) + "'");
}

inline Ensemble build_scenario(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioSpec::Kind::random_uniform: return random_admissible(spec.n, spec.seed, spec.speed);
    case ScenarioSpec::Kind::cap_clustered: return cap_clustered(spec.n, spec.center, spec.radius, spec.seed, spec.speed);
    case ScenarioSpec::Kind::circular_exact: {
      if (spec.phases.size() != spec.n) throw ConfigError("circular-exact needs one phase per agent");
      return circular_exact(spec.phases, 0.0);
    }
    case ScenarioSpec::Kind::antipodal_approach: {
      if (spec.n != 2) throw ConfigError("antipodal-approach scenario has exactly two agents");
      const AntipodalApproachState st = antipodal_approach_state(spec.time);
      Ensemble e;
      e.agents = {{st.x1, st.v1}, {st.x2, Vec3::Zero()}};
      return e;
    }
  }
  throw ConfigError("unhandled scenario kind");
}

}  // namespace sphereflock
