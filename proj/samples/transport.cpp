// Parallel transport of a tangent vector between two points of the sphere,
// and the weighted version that fades out near antipodal pairs.

#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include <sphereflock/sphereflock.hpp>

int main() {
  namespace sf = sphereflock;
  using sf::Vec3;

  const Vec3 from(1, 0, 0), to(0, 1, 0);
  const Vec3 v(0, 0.5, 0.5);
  const Vec3 moved = sf::rotate(from, to, v);
  std::cout << fmt::format("R v = ({:.3f}, {:.3f}, {:.3f}), |v| = {:.3f}, |R v| = {:.3f}\n", moved.x(), moved.y(),
                           moved.z(), v.norm(), moved.norm());

  const auto psi = sf::CommWeight::quadratic();
  const Vec3 north = Vec3::UnitZ();
  for (double gap : {1.0, 0.1, 0.01, 0.001}) {
    const Vec3 x(std::sin(gap), 0.0, -std::cos(gap));
    const Vec3 w = sf::weighted_transport(north, x, Vec3(0.3, 0.4, 0.0), psi);
    std::cout << fmt::format("|x + y| = {:.3e}  |psi R v| = {:.3e}\n", (north + x).norm(), w.norm());
  }
}
