#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "sphereflock/diagnostics.hpp"
#include "sphereflock/dynamics.hpp"
#include "sphereflock/ensemble.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"

namespace sphereflock {

struct Violation {
  std::size_t agent = 0;
  /// | |x| - 1 |
  double norm_residual = 0.0;
  /// | <x, v> |
  double tangency_residual = 0.0;
};

/// One entry per agent that is off the sphere or has a non-tangent velocity.
inline std::vector<Violation> check_admissible(const Ensemble& ens, double tol) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const AgentState& a = ens.agents[i];
    const double nr = std::abs(a.x.norm() - 1.0);
    const double tr = std::abs(a.x.dot(a.v));
    const bool finite = is_finite(a.x) && is_finite(a.v);
    if (!finite || !(nr <= tol) || !(tr <= tol)) out.push_back({i, nr, tr});
  }
  return out;
}

/// Pulls positions back onto the sphere and velocities into the tangent planes.
inline Ensemble project(Ensemble ens) {
  for (std::size_t i = 0; i < ens.size(); ++i) {
    AgentState& a = ens.agents[i];
    if (!is_finite(a.x) || !is_finite(a.v)) throw BlowupError("non-finite state at agent " + std::to_string(i));
    const double n = a.x.norm();
    if (n <= 0.5) throw BlowupError("agent " + std::to_string(i) + " drifted off the sphere");
    a.x /= n;
    a.v = tangent_project(a.x, a.v);
  }
  return ens;
}

/// Classical RK4 step of size p.dt on all positions and velocities, then a
/// projection back onto the constraint set.
inline Ensemble step_rk4(const Ensemble& ens, const SimParams& p) {
  const std::size_t n = ens.size();
  const double h = p.dt;

  auto shifted = [&](const std::vector<AgentRate>& k, double scale) {
    Ensemble s = ens;
    for (std::size_t i = 0; i < n; ++i) {
      s.agents[i].x += scale * k[i].dx;
      s.agents[i].v += scale * k[i].dv;
    }
    return s;
  };

  const auto k1 = rhs(ens, p);
  const auto k2 = rhs(shifted(k1, h / 2.0), p);
  const auto k3 = rhs(shifted(k2, h / 2.0), p);
  const auto k4 = rhs(shifted(k3, h), p);

  Ensemble next = ens;
  for (std::size_t i = 0; i < n; ++i) {
    next.agents[i].x += (h / 6.0) * (k1[i].dx + 2.0 * k2[i].dx + 2.0 * k3[i].dx + k4[i].dx);
    next.agents[i].v += (h / 6.0) * (k1[i].dv + 2.0 * k2[i].dv + 2.0 * k3[i].dv + k4[i].dv);
  }
  next.t = ens.t + h;
  return project(std::move(next));
}

struct Sample {
  Ensemble state;
  DiagnosticsRecord diag;
};

enum class RunStatus { ok, blowup };

/// Recorded samples of one run. Sample k sits at t0 + k * dt * record_every.
struct Trajectory {
  SimParams params;
  std::vector<Sample> samples;
  RunStatus status = RunStatus::ok;
  std::string message;

  bool ok() const { return status == RunStatus::ok; }
  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

/// Number of whole steps of size dt that fit into t_end.
inline std::size_t step_count(const SimParams& p) {
  return static_cast<std::size_t>(std::floor(p.t_end / p.dt * (1.0 + 1e-12)));
}

/// Called after each recorded sample; used for progress reporting.
using SampleObserver = std::function<void(const Sample&)>;

/// Integrates from ens0 to t_end. Bad initial data throws AdmissibilityError;
/// a blowup mid-run stops integration and is reported through the status of
/// the returned (partial) trajectory.
inline Trajectory simulate(const Ensemble& ens0, const SimParams& p, const SampleObserver& observer = {}) {
  p.validate();
  if (ens0.size() != p.n)
    throw ConfigError("ensemble has " + std::to_string(ens0.size()) + " agents, parameters say " +
                      std::to_string(p.n));
  if (const auto bad = check_admissible(ens0, p.tol.unit); !bad.empty())
    throw AdmissibilityError("initial data not admissible at agent " + std::to_string(bad.front().agent) +
                             " (norm residual " + std::to_string(bad.front().norm_residual) +
                             ", tangency residual " + std::to_string(bad.front().tangency_residual) + ")");

  Trajectory traj;
  traj.params = p;
  const double t0 = ens0.t;
  auto record = [&](const Ensemble& e) {
    traj.samples.push_back({e, make_record(e, p.sigma, p.weight, p.tol)});
    if (observer) observer(traj.samples.back());
  };

  Ensemble state = ens0;
  record(state);
  const std::size_t steps = step_count(p);
  try {
    for (std::size_t k = 1; k <= steps; ++k) {
      state = step_rk4(state, p);
      // Clock from the step index, not by accumulation.
      state.t = t0 + static_cast<double>(k) * p.dt;
      if (k % p.record_every == 0) record(state);
    }
  } catch (const BlowupError& e) {
    traj.status = RunStatus::blowup;
    traj.message = e.what();
  } catch (const DomainError& e) {
    traj.status = RunStatus::blowup;
    traj.message = e.what();
  }
  return traj;
}

}  // namespace sphereflock
