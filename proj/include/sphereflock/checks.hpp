#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sphereflock/diagnostics.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/integrator.hpp"

// Trajectory-level checks of the energy, boundedness and regularity
// properties of the flocking system. Each returns a report carrying the
// observed worst case next to the pass flag.

namespace sphereflock {

inline double initial_energy(const Trajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  return traj.front().diag.energy;
}

struct ConstraintReport {
  double max_norm_residual = 0.0;
  double max_tangency_residual = 0.0;
  bool pass = true;
};

inline ConstraintReport constraint_check(const Trajectory& traj, double tol = 1e-12) {
  ConstraintReport rep;
  for (const auto& s : traj.samples) {
    for (const auto& a : s.state.agents) {
      rep.max_norm_residual = std::max(rep.max_norm_residual, std::abs(a.x.norm() - 1.0));
      rep.max_tangency_residual = std::max(rep.max_tangency_residual, std::abs(a.x.dot(a.v)));
    }
  }
  rep.pass = rep.max_norm_residual <= tol && rep.max_tangency_residual <= tol;
  return rep;
}

struct MonotoneReport {
  /// Largest E(t_{k+1}) - E(t_k) per integration step.
  double max_increase_per_step = -std::numeric_limits<double>::infinity();
  bool pass = true;
};

inline MonotoneReport energy_monotone_check(const Trajectory& traj, double per_step = 1e-10) {
  MonotoneReport rep;
  const double steps = static_cast<double>(traj.params.record_every);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double rise = (traj.samples[k].diag.energy - traj.samples[k - 1].diag.energy) / steps;
    rep.max_increase_per_step = std::max(rep.max_increase_per_step, rise);
  }
  rep.pass = traj.samples.size() < 2 || rep.max_increase_per_step <= per_step;
  return rep;
}

struct SpeedReport {
  double bound = 0.0;
  double max_speed = 0.0;
  bool pass = true;
};

/// max_i |v_i(t)| <= sqrt(N E(0)) at every sample.
inline SpeedReport speed_bound_check(const Trajectory& traj, double slack = 1e-8) {
  SpeedReport rep;
  rep.bound = std::sqrt(static_cast<double>(traj.params.n) * initial_energy(traj));
  for (const auto& s : traj.samples) rep.max_speed = std::max(rep.max_speed, s.diag.v_max);
  rep.pass = rep.max_speed <= rep.bound + slack;
  return rep;
}

struct DissipationReport {
  /// max over interior samples of |central difference of E - predicted rate|.
  double max_error = 0.0;
  double at_time = 0.0;
  std::size_t checked = 0;
  bool pass = true;
};

/// Compares the centered difference (E_{k+1} - E_{k-1}) / (t_{k+1} - t_{k-1})
/// with the dissipation rate recorded at sample k.
inline DissipationReport dissipation_identity_check(const Trajectory& traj, double tol = 1e-5) {
  DissipationReport rep;
  const auto& s = traj.samples;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double slope = (s[k + 1].diag.energy - s[k - 1].diag.energy) / (s[k + 1].diag.t - s[k - 1].diag.t);
    const double err = std::abs(slope - s[k].diag.dissipation);
    if (err > rep.max_error) {
      rep.max_error = err;
      rep.at_time = s[k].diag.t;
    }
    ++rep.checked;
  }
  rep.pass = rep.max_error < tol;
  return rep;
}

struct DiameterReport {
  bool skipped = false;
  double diameter_sq_bound = 0.0;
  double max_diameter_sq = 0.0;
  double speed_sq_bound = 0.0;
  double max_speed_sq = 0.0;
  bool pass = true;
};

/// For sigma > 0: |x_i - x_j|^2 <= 2 N^2 E(0) / sigma and |v_i|^2 <= N E(0)
/// at every sample. Skipped without bonding.
inline DiameterReport diameter_bound_check(const Trajectory& traj, double slack = 1e-8) {
  DiameterReport rep;
  if (!(traj.params.sigma > 0.0)) {
    rep.skipped = true;
    return rep;
  }
  const double nd = static_cast<double>(traj.params.n);
  const double e0 = initial_energy(traj);
  rep.diameter_sq_bound = 2.0 * nd * nd * e0 / traj.params.sigma;
  rep.speed_sq_bound = nd * e0;
  for (const auto& s : traj.samples) {
    rep.max_diameter_sq = std::max(rep.max_diameter_sq, s.diag.diameter * s.diag.diameter);
    rep.max_speed_sq = std::max(rep.max_speed_sq, s.diag.v_max * s.diag.v_max);
  }
  rep.pass = rep.max_diameter_sq <= rep.diameter_sq_bound + slack && rep.max_speed_sq <= rep.speed_sq_bound + slack;
  return rep;
}

struct DrdtPoint {
  double t = 0.0;
  /// Entrywise sup of the central difference of R(x_j, x_i).
  double rate = 0.0;
  double v_max = 0.0;
  /// |x_i + x_j|
  double margin = 0.0;
  /// rate / (v_max (1 + 1 / margin)).
  double ratio = 0.0;
};

struct DrdtReport {
  std::vector<DrdtPoint> points;
  double max_ratio = 0.0;
  double c_fit = 0.0;
  bool pass = true;
};

/// Finite-difference check of |dR(x_j, x_i)/dt| <= C V_max (1 + 1/|x_i + x_j|)
/// at every interior sample. A non-positive c_fit fits C as the largest
/// observed ratio. Throws WindowError if the pair comes within the antipodal
/// cutoff and DomainError if samples are further apart than max_spacing.
inline DrdtReport dR_dt_bound_check(const Trajectory& traj, std::pair<std::size_t, std::size_t> pair, double c_fit,
                                    double max_spacing = 1e-2) {
  const auto [i, j] = pair;
  const auto& s = traj.samples;
  if (s.empty() || i >= s.front().state.size() || j >= s.front().state.size())
    throw DomainError("pair index out of range");
  const GeometryTolerances& tol = traj.params.tol;
  for (const auto& smp : s)
    if ((smp.state[i].x + smp.state[j].x).norm() <= tol.antipodal)
      throw WindowError("pair reaches the antipodal cutoff at t = " + std::to_string(smp.diag.t));

  DrdtReport rep;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double span = s[k + 1].diag.t - s[k - 1].diag.t;
    if (span > 2.0 * max_spacing * (1.0 + 1e-9)) throw DomainError("samples too sparse for finite differences");
    const Mat3 ahead = rotation_matrix(s[k + 1].state[j].x, s[k + 1].state[i].x, tol);
    const Mat3 behind = rotation_matrix(s[k - 1].state[j].x, s[k - 1].state[i].x, tol);
    DrdtPoint p;
    p.t = s[k].diag.t;
    p.rate = ((ahead - behind) / span).cwiseAbs().maxCoeff();
    p.v_max = s[k].diag.v_max;
    p.margin = (s[k].state[i].x + s[k].state[j].x).norm();
    const double scale = p.v_max * (1.0 + 1.0 / p.margin);
    p.ratio = (p.rate == 0.0) ? 0.0 : (scale > 0.0 ? p.rate / scale : std::numeric_limits<double>::infinity());
    rep.max_ratio = std::max(rep.max_ratio, p.ratio);
    rep.points.push_back(p);
  }
  rep.c_fit = c_fit > 0.0 ? c_fit : rep.max_ratio;
  rep.pass = std::isfinite(rep.max_ratio) && rep.max_ratio <= rep.c_fit;
  return rep;
}

struct EquivalenceReport {
  /// Velocity bound V = 2 sqrt(N E(0)) for |R v_j - v_i|.
  double velocity_bound = 0.0;
  /// max over pairs, samples and k of f_k / (V^(k-1) f_1); at most 1.
  double max_forward_ratio = 0.0;
  /// max over pairs, samples and k of f_1 / (2^(1-1/k) f_k^(1/k)); at most 1.
  double max_backward_ratio = 0.0;
  /// First sample time after which every f_1 stays below eps.
  std::optional<double> tail_start;
  /// Largest f_k / (eps V^(k-1)) on that tail.
  double tail_worst = 0.0;
  bool pass = true;
};

/// Checks that the flocking functionals f_k = |x_i + x_j| |R v_j - v_i|^k
/// decay together, via f_k = |R v_j - v_i|^(k-1) f_1 <= V^(k-1) f_1 and
/// f_1 = |x_i + x_j|^(1 - 1/k) f_k^(1/k) <= 2^(1-1/k) f_k^(1/k).
inline EquivalenceReport metric_equivalence_check(const Trajectory& traj, const std::vector<double>& k_list,
                                                  double eps = 1e-3) {
  for (double k : k_list)
    if (!(k >= 1.0)) throw DomainError("metric equivalence exponents must be >= 1");
  EquivalenceReport rep;
  const GeometryTolerances& tol = traj.params.tol;
  rep.velocity_bound = 2.0 * std::sqrt(static_cast<double>(traj.params.n) * initial_energy(traj)) * (1.0 + 1e-9);
  const double v = rep.velocity_bound;

  // f_1 and |R v_j - v_i| per sample and pair.
  struct PairValue {
    double f1;
    double rel;
    double margin;
  };
  std::vector<std::vector<PairValue>> values;
  for (const auto& s : traj.samples) {
    std::vector<PairValue> row;
    const auto& ag = s.state.agents;
    for (std::size_t i = 0; i < ag.size(); ++i) {
      for (std::size_t j = i + 1; j < ag.size(); ++j) {
        const auto rel = relative_velocity(ag[i], ag[j], tol);
        const double m = (ag[i].x + ag[j].x).norm();
        row.push_back(rel ? PairValue{m * rel->norm(), rel->norm(), m} : PairValue{0.0, 0.0, 0.0});
      }
    }
    values.push_back(std::move(row));
  }

  for (const auto& row : values) {
    for (const auto& pv : row) {
      for (double k : k_list) {
        const double fk = pv.margin * std::pow(pv.rel, k);
        if (pv.f1 > 0.0) rep.max_forward_ratio = std::max(rep.max_forward_ratio, fk / (std::pow(v, k - 1.0) * pv.f1));
        if (fk > 0.0)
          rep.max_backward_ratio =
              std::max(rep.max_backward_ratio, pv.f1 / (std::pow(2.0, 1.0 - 1.0 / k) * std::pow(fk, 1.0 / k)));
      }
    }
  }

  std::size_t tail = values.size();
  while (tail > 0) {
    const auto& row = values[tail - 1];
    if (std::any_of(row.begin(), row.end(), [&](const PairValue& pv) { return !(pv.f1 < eps); })) break;
    --tail;
  }
  if (tail < values.size()) {
    rep.tail_start = traj.samples[tail].diag.t;
    for (std::size_t s = tail; s < values.size(); ++s)
      for (const auto& pv : values[s])
        for (double k : k_list)
          rep.tail_worst = std::max(rep.tail_worst, pv.margin * std::pow(pv.rel, k) / (eps * std::pow(v, k - 1.0)));
  }
  const double slack = 1.0 + 1e-9;
  rep.pass = rep.max_forward_ratio <= slack && rep.max_backward_ratio <= slack && rep.tail_worst < 1.0;
  return rep;
}

struct FlockingVerdict {
  double final_metric = 0.0;
  double worst_tail_metric = 0.0;
  double min_tail_margin = 2.0;
  double margin_sq_floor = 0.0;
  bool flocking = false;
};

/// Finite-horizon flocking call: over the last 10% of samples the flocking
/// metric stays below metric_tol and the antipodal margin respects the
/// bonding bound |x_i + x_j|^2 > 4 - 2 N^2 E(0) / sigma. Without bonding the
/// margin only has to stay clear of the antipodal cutoff.
inline FlockingVerdict flocking_verdict(const Trajectory& traj, double metric_tol = 1e-3) {
  FlockingVerdict v;
  if (traj.samples.empty()) return v;
  const auto& s = traj.samples;
  const std::size_t tail = s.size() - std::max<std::size_t>(1, s.size() / 10);
  for (std::size_t k = tail; k < s.size(); ++k) {
    v.worst_tail_metric = std::max(v.worst_tail_metric, s[k].diag.flock_metric);
    v.min_tail_margin = std::min(v.min_tail_margin, s[k].diag.antipodal_margin);
  }
  v.final_metric = s.back().diag.flock_metric;
  const double nd = static_cast<double>(traj.params.n);
  if (traj.params.sigma > 0.0) {
    v.margin_sq_floor = 4.0 - 2.0 * nd * nd * initial_energy(traj) / traj.params.sigma - 1e-6;
    v.flocking = v.worst_tail_metric < metric_tol && v.min_tail_margin * v.min_tail_margin > v.margin_sq_floor;
  } else {
    v.margin_sq_floor = traj.params.tol.antipodal * traj.params.tol.antipodal;
    v.flocking = v.worst_tail_metric < metric_tol && v.min_tail_margin > traj.params.tol.antipodal;
  }
  return v;
}

}  // namespace sphereflock
