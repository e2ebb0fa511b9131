// Five agents on a small cap, bonded just above the flocking threshold.
// Prints the flocking metric and energy every ten time units.

#include <iostream>

#include <fmt/format.h>

#include <sphereflock/sphereflock.hpp>

int main() {
  namespace sf = sphereflock;

  const sf::Ensemble start = sf::cap_clustered(5, sf::Vec3::UnitZ(), 0.3, 1, 0.1);

  sf::SimParams p;
  p.n = start.size();
  p.sigma = sf::threshold_sigma(start, 1.5);
  p.t_end = 100.0;

  const sf::Trajectory traj = sf::simulate(start, p, [](const sf::Sample& s) {
    const auto& d = s.diag;
    if (static_cast<long>(d.t * 10 + 0.5) % 100 == 0)
      std::cout << fmt::format("t={:6.1f}  E={:.6e}  flock_metric={:.3e}  margin={:.6f}\n", d.t, d.energy,
                               d.flock_metric, d.antipodal_margin);
  });

  const auto verdict = sf::flocking_verdict(traj);
  std::cout << fmt::format("sigma={:.4f}  condition={}  flocking={}\n", p.sigma,
                           sf::flocking_condition(p.n, sf::initial_energy(traj), p.sigma), verdict.flocking);
  return verdict.flocking ? 0 : 1;
}
