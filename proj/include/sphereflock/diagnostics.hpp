#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "sphereflock/ensemble.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/random.hpp"
#include "sphereflock/vec.hpp"
#include "sphereflock/weight.hpp"

namespace sphereflock {

struct Energy {
  double total = 0.0;
  double kinetic = 0.0;
  double configuration = 0.0;
};

/// Per-sample summary attached to every recorded trajectory point.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double configuration = 0.0;
  double v_max = 0.0;
  /// dE/dt predicted by the dissipation identity; never positive.
  double dissipation = 0.0;
  double flock_metric = 0.0;
  /// min over pairs of |x_i + x_j|.
  double antipodal_margin = 2.0;
  /// max over pairs of |x_i - x_j|.
  double diameter = 0.0;
};

/// E_K = (1/N) sum |v_k|^2, E_C = sigma/(2N^2) sum_{k,l} |x_k - x_l|^2.
inline Energy energy(const Ensemble& ens, double sigma) {
  const std::size_t n = ens.size();
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  double kinetic = 0.0;
  for (const auto& a : ens.agents) kinetic += a.v.squaredNorm();
  kinetic /= nd;
  double spread = 0.0;
  if (sigma != 0.0) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) spread += (ens.agents[k].x - ens.agents[l].x).squaredNorm();
  }
  const double configuration = sigma / (2.0 * nd * nd) * spread;
  return {kinetic + configuration, kinetic, configuration};
}

/// R(x_j -> x_i) v_j - v_i, or nothing for a pair within the antipodal cutoff.
inline std::optional<Vec3> relative_velocity(const AgentState& ai, const AgentState& aj,
                                             const GeometryTolerances& tol = {}) {
  if ((ai.x + aj.x).norm() <= tol.antipodal) return std::nullopt;
  return Vec3(rotation_matrix(aj.x, ai.x, tol) * aj.v - ai.v);
}

/// -(1/N^2) sum_{i,j} psi_ij |R(x_j -> x_i) v_j - v_i|^2.
template <PairWeight W>
double dissipation_rate(const Ensemble& ens, const W& psi, const GeometryTolerances& tol = {}) {
  const std::size_t n = ens.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto rel = relative_velocity(ens.agents[i], ens.agents[j], tol);
      if (!rel) continue;
      sum += psi(Separation::of(ens.agents[i].x, ens.agents[j].x)) * rel->squaredNorm();
    }
  }
  const double nd = static_cast<double>(n);
  return n == 0 ? 0.0 : -sum / (nd * nd);
}

/// max_{i,j} |x_i + x_j| |R(x_j -> x_i) v_j - v_i|, zero for antipodal pairs.
inline double flock_metric(const Ensemble& ens, const GeometryTolerances& tol = {}) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    for (std::size_t j = i + 1; j < ens.size(); ++j) {
      const auto rel = relative_velocity(ens.agents[i], ens.agents[j], tol);
      if (!rel) continue;
      worst = std::max(worst, (ens.agents[i].x + ens.agents[j].x).norm() * rel->norm());
    }
  }
  return worst;
}

/// min_{i<j} |x_i + x_j|; 2 for a single agent.
inline double antipodal_margin(const Ensemble& ens) {
  double margin = 2.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    for (std::size_t j = i + 1; j < ens.size(); ++j)
      margin = std::min(margin, (ens.agents[i].x + ens.agents[j].x).norm());
  return margin;
}

inline double diameter(const Ensemble& ens) {
  double d = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    for (std::size_t j = i + 1; j < ens.size(); ++j) d = std::max(d, (ens.agents[i].x - ens.agents[j].x).norm());
  return d;
}

inline double max_speed(const Ensemble& ens) {
  double v = 0.0;
  for (const auto& a : ens.agents) v = std::max(v, a.v.norm());
  return v;
}

template <PairWeight W>
DiagnosticsRecord make_record(const Ensemble& ens, double sigma, const W& psi, const GeometryTolerances& tol = {}) {
  const Energy e = energy(ens, sigma);
  DiagnosticsRecord r;
  r.t = ens.t;
  r.energy = e.total;
  r.kinetic = e.kinetic;
  r.configuration = e.configuration;
  r.v_max = max_speed(ens);
  r.dissipation = dissipation_rate(ens, psi, tol);
  r.flock_metric = flock_metric(ens, tol);
  r.antipodal_margin = antipodal_margin(ens);
  r.diameter = diameter(ens);
  return r;
}

/// Sufficient condition for flocking: sigma > N^2 E(0) / 2.
inline bool flocking_condition(std::size_t n, double e0, double sigma) {
  const double nd = static_cast<double>(n);
  return sigma > nd * nd * e0 / 2.0;
}

struct SandwichReport {
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  bool pass = false;
};

/// Empirical range of psi(|x - y|) / |x + y|^2 over random unit pairs. Both
/// extremes must be finite and positive. The quadratic weight must give 1/4
/// everywhere and the linear weight kappa/(2 + r), i.e. [kappa/4, kappa/2].
inline SandwichReport weight_sandwich_check(const CommWeight& psi, std::size_t samples, std::uint64_t seed,
                                            double tol = 1e-12) {
  Rng rng(seed);
  SandwichReport rep;
  for (std::size_t k = 0; k < samples; ++k) {
    const Vec3 x = random_unit(rng);
    const Vec3 y = random_unit(rng);
    const double s2 = (x + y).squaredNorm();
    if (s2 == 0.0) continue;
    const double ratio = psi(Separation::of(x, y)) / s2;
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  rep.pass = std::isfinite(rep.ratio_min) && std::isfinite(rep.ratio_max) && rep.ratio_min > 0.0 &&
             rep.ratio_max >= rep.ratio_min;
  if (psi.kind() == CommWeight::Kind::quadratic)
    rep.pass = rep.pass && std::abs(rep.ratio_min - 0.25) <= tol && std::abs(rep.ratio_max - 0.25) <= tol;
  if (psi.kind() == CommWeight::Kind::linear)
    rep.pass = rep.pass && rep.ratio_min >= psi.kappa() / 4.0 - tol && rep.ratio_max <= psi.kappa() / 2.0 + tol;
  return rep;
}

}  // namespace sphereflock
