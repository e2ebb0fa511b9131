#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "sphereflock/checks.hpp"
#include "sphereflock/diagnostics.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/random.hpp"
#include "sphereflock/scenarios.hpp"

// Property suites behind `sphereflock verify`. Random sampling suites draw
// from --seed; the long-horizon flocking runs use fixed reference scenarios.

namespace sphereflock {

struct CheckLine {
  std::string check;
  double observed = 0.0;
  std::string threshold;
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckLine> lines;

  bool pass() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
  }
};

namespace reference {

inline const std::vector<double> kCircularPhases{0.0, std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};

/// Worst position error against the closed-form circular motion.
inline double circular_error(double dt, double t_end) {
  SimParams p;
  p.n = kCircularPhases.size();
  p.dt = dt;
  p.t_end = t_end;
  p.record_every = 1;
  const Trajectory traj = simulate(circular_exact(kCircularPhases, 0.0), p);
  double err = 0.0;
  for (const auto& s : traj.samples) {
    const Ensemble exact = circular_exact(kCircularPhases, s.state.t);
    for (std::size_t i = 0; i < exact.size(); ++i) err = std::max(err, (s.state[i].x - exact[i].x).norm());
  }
  return err;
}

/// Least-squares slope of log(err) against log(dt).
inline double convergence_order(const std::vector<double>& dts, const std::vector<double>& errs) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < dts.size(); ++k) mx += std::log(dts[k]), my += std::log(errs[k]);
  mx /= static_cast<double>(dts.size());
  my /= static_cast<double>(dts.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < dts.size(); ++k) {
    const double dx = std::log(dts[k]) - mx;
    sxy += dx * (std::log(errs[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Cap-clustered bonding run at 1.5 times the flocking threshold.
inline Trajectory bonded_flock_run() {
  const Ensemble e0 = cap_clustered(5, Vec3::UnitZ(), 0.3, 1, 0.1);
  SimParams p;
  p.n = 5;
  p.sigma = threshold_sigma(e0, 1.5);
  p.dt = 1e-3;
  p.t_end = 100.0;
  p.record_every = 100;
  return simulate(e0, p);
}

/// Cap-clustered run without bonding.
inline Trajectory alignment_run() {
  SimParams p;
  p.n = 5;
  p.sigma = 0.0;
  p.dt = 1e-3;
  p.t_end = 200.0;
  p.record_every = 100;
  return simulate(cap_clustered(5, Vec3::UnitZ(), 0.5, 1, 0.5), p);
}

}  // namespace reference

inline SuiteResult suite_geometry(std::uint64_t seed, std::size_t pairs = 100000) {
  Rng rng(seed);
  double orth = 0, transpose = 0, maps_x1 = 0, maps_x2 = 0, axis = 0, norm = 0, formula = 0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vec3 a = random_unit(rng);
    const Vec3 b = random_unit(rng);
    const Vec3 v = random_gaussian(rng);
    if ((a + b).norm() <= GeometryTolerances{}.antipodal) continue;
    const Mat3 r = rotation_matrix(a, b);
    const Vec3 axis_vec = a.cross(b);
    orth = std::max(orth, (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff());
    transpose = std::max(transpose, (r.transpose() - rotation_matrix(b, a)).cwiseAbs().maxCoeff());
    maps_x1 = std::max(maps_x1, (r * a - b).cwiseAbs().maxCoeff());
    maps_x2 = std::max(maps_x2, (r * b - (2.0 * a.dot(b) * b - a)).cwiseAbs().maxCoeff());
    axis = std::max(axis, (r * axis_vec - axis_vec).cwiseAbs().maxCoeff());
    norm = std::max(norm, std::abs((r * v).norm() - v.norm()));
    formula = std::max(formula, (r - rotation_matrix_rodrigues(a, b)).cwiseAbs().maxCoeff());
  }
  const std::string thr = "< 1e-12";
  return {"geometry",
          {{"R^T R = I", orth, thr, orth < 1e-12},
           {"R^T = R(x2,x1)", transpose, thr, transpose < 1e-12},
           {"R x1 = x2", maps_x1, thr, maps_x1 < 1e-12},
           {"R x2 = 2<x1,x2>x2 - x1", maps_x2, thr, maps_x2 < 1e-12},
           {"R (x1 x x2) = x1 x x2", axis, thr, axis < 1e-12},
           {"|R v| = |v|", norm, thr, norm < 1e-12},
           {"rotation vs axis-angle", formula, thr, formula < 1e-12}}};
}

inline SuiteResult suite_sandwich(std::uint64_t seed, std::size_t pairs = 100000) {
  const SandwichReport q = weight_sandwich_check(CommWeight::quadratic(), pairs, seed);
  const SandwichReport l = weight_sandwich_check(CommWeight::linear(1.0), pairs, seed);
  const double q_dev = std::max(std::abs(q.ratio_min - 0.25), std::abs(q.ratio_max - 0.25));
  return {"sandwich",
          {{"quadratic |ratio - 1/4|", q_dev, "<= 1e-12", q.pass},
           {"linear min ratio", l.ratio_min, ">= 1/4 - 1e-12", l.ratio_min >= 0.25 - 1e-12},
           {"linear max ratio", l.ratio_max, "<= 1/2 + 1e-12", l.ratio_max <= 0.5 + 1e-12}}};
}

inline SuiteResult suite_exact() {
  const double err = reference::circular_error(1e-3, 8.0);
  return {"exact", {{"circular motion position error", err, "< 1e-9", err < 1e-9}}};
}

inline SuiteResult suite_convergence() {
  const std::vector<double> dts{4e-3, 2e-3, 1e-3};
  std::vector<double> errs;
  for (double dt : dts) errs.push_back(reference::circular_error(dt, 8.0));
  const double order = reference::convergence_order(dts, errs);
  return {"convergence", {{"fitted RK4 order", order, "in [3.7, 4.3]", order >= 3.7 && order <= 4.3}}};
}

inline SuiteResult suite_dissipation(std::uint64_t seed) {
  SuiteResult res{"dissipation", {}};
  for (double sigma : {0.0, 1.0, 10.0}) {
    SimParams p;
    p.n = 10;
    p.sigma = sigma;
    p.dt = 2.5e-4;
    p.t_end = 20.0;
    p.record_every = 1;
    const Trajectory traj = simulate(random_admissible(10, seed), p);
    const auto ident = dissipation_identity_check(traj, 1e-5);
    const auto mono = energy_monotone_check(traj, 1e-10);
    const auto speed = speed_bound_check(traj, 1e-8);
    const auto cons = constraint_check(traj, 1e-12);
    const std::string tag = fmt::format("sigma={:g} ", sigma);
    res.lines.push_back({tag + "|dE/dt - rate|", ident.max_error, "< 1e-5", ident.pass && traj.ok()});
    res.lines.push_back({tag + "max energy rise per step", mono.max_increase_per_step, "<= 1e-10", mono.pass});
    res.lines.push_back({tag + "v_max - sqrt(N E0)", speed.max_speed - speed.bound, "<= 1e-8", speed.pass});
    res.lines.push_back({tag + "constraint residual", std::max(cons.max_norm_residual, cons.max_tangency_residual),
                         "<= 1e-12", cons.pass});
  }
  return res;
}

inline SuiteResult suite_alignment() {
  const Trajectory traj = reference::alignment_run();
  double running_min = std::numeric_limits<double>::infinity();
  double worst_rebound = 0.0;
  for (const auto& s : traj.samples) {
    if (s.diag.t > 50.0) worst_rebound = std::max(worst_rebound, s.diag.flock_metric / running_min);
    running_min = std::min(running_min, s.diag.flock_metric);
  }
  const double final_metric = traj.back().diag.flock_metric;
  return {"alignment",
          {{"final flock_metric (sigma=0, t=200)", final_metric, "< 1e-2", traj.ok() && final_metric < 1e-2},
           {"rebound over running min after t=50", worst_rebound, "<= 1.1", worst_rebound <= 1.1}}};
}

inline SuiteResult suite_flocking() {
  const Trajectory traj = reference::bonded_flock_run();
  const double nd = static_cast<double>(traj.params.n);
  const double e0 = initial_energy(traj);
  double min_margin = 2.0;
  for (const auto& s : traj.samples) min_margin = std::min(min_margin, s.diag.antipodal_margin);
  const double floor = 4.0 - 2.0 * nd * nd * e0 / traj.params.sigma - 1e-6;
  const auto diam = diameter_bound_check(traj, 1e-8);
  const double final_metric = traj.back().diag.flock_metric;
  return {"flocking",
          {{"final flock_metric (t=100)", final_metric, "< 1e-3", traj.ok() && final_metric < 1e-3},
           {"min margin^2 - (4 - 2N^2E0/sigma)", min_margin * min_margin - floor, "> 0", min_margin * min_margin > floor},
           {"max diameter^2 - 2N^2E0/sigma", diam.max_diameter_sq - diam.diameter_sq_bound, "<= 1e-8", diam.pass}}};
}

inline SuiteResult suite_drdt() {
  const Trajectory path = antipodal_approach_trajectory(0.01, 0.5, 1e-4);
  const DrdtReport rep = dR_dt_bound_check(path, {0, 1}, 0.0);
  double sharp = 0.0;
  for (const auto& p : rep.points)
    if (p.t < 0.05) sharp = std::max(sharp, p.rate / (rep.c_fit * p.v_max / p.margin));
  return {"drdt",
          {{"fitted C", rep.c_fit, "finite", std::isfinite(rep.c_fit) && rep.c_fit > 0.0},
           {"max ratio / C", rep.max_ratio / rep.c_fit, "<= 1", rep.pass},
           {"singular-term ratio for t < 0.05", sharp, "> 0.25", sharp > 0.25}}};
}

inline SuiteResult suite_equivalence() {
  const Trajectory traj = reference::bonded_flock_run();
  const EquivalenceReport rep = metric_equivalence_check(traj, {1.0, 2.0, 3.0}, 1e-3);
  return {"equivalence",
          {{"f_1 < 1e-3 tail start", rep.tail_start.value_or(-1.0), "exists", rep.tail_start.has_value()},
           {"tail max f_k / (eps V^(k-1))", rep.tail_worst, "< 1", rep.tail_start && rep.tail_worst < 1.0},
           {"f_k / (V^(k-1) f_1)", rep.max_forward_ratio, "<= 1", rep.max_forward_ratio <= 1.0 + 1e-9},
           {"f_1 / (2^(1-1/k) f_k^(1/k))", rep.max_backward_ratio, "<= 1", rep.max_backward_ratio <= 1.0 + 1e-9}}};
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "sandwich",  "exact", "convergence", "dissipation",
                                              "alignment", "flocking", "drdt",  "equivalence"};
  return names;
}

inline bool is_suite(std::string_view name) {
  const auto& n = suite_names();
  return name == "all" || std::find(n.begin(), n.end(), name) != n.end();
}

inline SuiteResult run_suite(std::string_view name, std::uint64_t seed) {
  if (name == "geometry") return suite_geometry(seed);
  if (name == "sandwich") return suite_sandwich(seed);
  if (name == "exact") return suite_exact();
  if (name == "convergence") return suite_convergence();
  if (name == "dissipation") return suite_dissipation(seed);
  if (name == "alignment") return suite_alignment();
  if (name == "flocking") return suite_flocking();
  if (name == "drdt") return suite_drdt();
  if (name == "equivalence") return suite_equivalence();
  throw ConfigError("unknown suite '" + std::string(name) + "'");
}

inline void print_suite(std::ostream& out, const SuiteResult& r) {
  for (const auto& l : r.lines)
    out << fmt::format("{:<12} {:<40} {:>13.6e}  {:<16} {}\n", r.name, l.check, l.observed, l.threshold,
                       l.pass ? "PASS" : "FAIL");
}

}  // namespace sphereflock
