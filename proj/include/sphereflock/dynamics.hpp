#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sphereflock/ensemble.hpp"
#include "sphereflock/errors.hpp"
#include "sphereflock/geometry.hpp"
#include "sphereflock/parallel.hpp"
#include "sphereflock/vec.hpp"
#include "sphereflock/weight.hpp"

namespace sphereflock {

/// Ensembles at least this large spread the force loop over workers.
inline constexpr std::size_t kParallelAgentThreshold = 256;

/// -|v|^2 x / |x|^2, the normal acceleration that keeps an agent on the sphere.
inline Vec3 centripetal_force(const AgentState& a) { return -(a.v.squaredNorm() / a.x.squaredNorm()) * a.x; }

namespace detail {

inline Vec3 position_sum(const Ensemble& ens) {
  Vec3 s = Vec3::Zero();
  for (const auto& a : ens.agents) s += a.x;
  return s;
}

// (sigma/N) sum_k (|x_i|^2 x_k - <x_i,x_k> x_i), with sum_k x_k precomputed.
inline Vec3 bonding_from_sum(const Vec3& xi, const Vec3& sum, double sigma, std::size_t n) {
  if (sigma == 0.0) return Vec3::Zero();
  return (sigma / static_cast<double>(n)) * (xi.squaredNorm() * sum - xi.dot(sum) * xi);
}

// Pair terms use directions x/|x|, so stage states of a Runge-Kutta step that
// sit slightly off the sphere still see an orthogonal transport.
template <PairWeight W>
Vec3 alignment_from_units(std::size_t i, const std::vector<Vec3>& units, const Ensemble& ens, const W& psi,
                          const GeometryTolerances& tol) {
  const Vec3& xi = units[i];
  const Vec3& vi = ens.agents[i].v;
  Vec3 acc = Vec3::Zero();
  for (std::size_t j = 0; j < units.size(); ++j) {
    const Vec3& xj = units[j];
    if ((xi + xj).norm() <= tol.antipodal) continue;
    const double w = psi(Separation::of(xi, xj));
    acc += weighted_transport(xi, xj, ens.agents[j].v, psi, tol) - w * vi;
  }
  return acc / static_cast<double>(units.size());
}

inline std::vector<Vec3> unit_positions(const Ensemble& ens) {
  std::vector<Vec3> units(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const AgentState& a = ens.agents[i];
    if (!is_finite(a.x) || !is_finite(a.v))
      throw DomainError("non-finite state at agent " + std::to_string(i));
    const double norm = a.x.norm();
    if (!(norm > 0.0)) throw DomainError("agent " + std::to_string(i) + " sits at the origin");
    units[i] = a.x / norm;
  }
  return units;
}

}  // namespace detail

/// Lohe-type bonding force on agent i; tangent to the sphere at x_i.
inline Vec3 bonding_force(std::size_t i, const Ensemble& ens, double sigma) {
  return detail::bonding_from_sum(ens.agents.at(i).x, detail::position_sum(ens), sigma, ens.size());
}

/// (1/N) sum_j [psi_ij R(x_j -> x_i) v_j - psi_ij v_i]; pairs within the
/// antipodal cutoff contribute nothing.
template <PairWeight W>
Vec3 alignment_force(std::size_t i, const Ensemble& ens, const W& psi, const GeometryTolerances& tol = {}) {
  if (i >= ens.size()) throw DomainError("agent index out of range");
  return detail::alignment_from_units(i, detail::unit_positions(ens), ens, psi, tol);
}

/// Right-hand side of the flocking system:
///   dx_i = v_i
///   dv_i = centripetal + alignment + bonding
/// Agent i's sum over j always runs in index order, so the result is the
/// same for any worker count.
inline std::vector<AgentRate> rhs(const Ensemble& ens, const SimParams& p) {
  const std::vector<Vec3> units = detail::unit_positions(ens);
  const Vec3 sum = detail::position_sum(ens);
  std::vector<AgentRate> out(ens.size());
  for_each_index(ens.size(), kParallelAgentThreshold, [&](std::size_t i) {
    const AgentState& a = ens.agents[i];
    out[i].dx = a.v;
    out[i].dv = centripetal_force(a) + detail::alignment_from_units(i, units, ens, p.weight, p.tol) +
                detail::bonding_from_sum(a.x, sum, p.sigma, ens.size());
  });
  return out;
}

}  // namespace sphereflock
