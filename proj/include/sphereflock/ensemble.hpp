#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/vec.hpp"
#include "sphereflock/weight.hpp"

namespace sphereflock {

struct AgentState {
  Vec3 x = Vec3::UnitX();
  Vec3 v = Vec3::Zero();

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Positions on the unit sphere, tangent velocities and the clock.
struct Ensemble {
  std::vector<AgentState> agents;
  double t = 0.0;

  std::size_t size() const { return agents.size(); }
  const AgentState& operator[](std::size_t i) const { return agents[i]; }
  AgentState& operator[](std::size_t i) { return agents[i]; }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// Time derivative of one agent's state.
struct AgentRate {
  Vec3 dx = Vec3::Zero();
  Vec3 dv = Vec3::Zero();
};

struct SimParams {
  std::size_t n = 3;
  /// Bonding rate.
  double sigma = 0.0;
  CommWeight weight = CommWeight::quadratic();
  double dt = 1e-3;
  double t_end = 50.0;
  std::size_t record_every = 100;
  std::uint64_t seed = 0;
  GeometryTolerances tol;

  void validate() const {
    if (n < 1) throw ConfigError("n must be at least 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be non-negative");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be non-negative");
    if (record_every < 1) throw ConfigError("record_every must be at least 1");
  }

  friend bool operator==(const SimParams& a, const SimParams& b) {
    return a.n == b.n && a.sigma == b.sigma && a.weight == b.weight && a.dt == b.dt && a.t_end == b.t_end &&
           a.record_every == b.record_every && a.seed == b.seed && a.tol.antipodal == b.tol.antipodal &&
           a.tol.coincident == b.tol.coincident && a.tol.unit == b.tol.unit;
  }
};

}  // namespace sphereflock
