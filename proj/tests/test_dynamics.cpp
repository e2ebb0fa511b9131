#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sphereflock/dynamics.hpp"
#include "sphereflock/scenarios.hpp"
#include "support.hpp"

namespace sf = sphereflock;
using sf::AgentState;
using sf::Ensemble;
using sf::Vec3;

namespace {

Ensemble make(std::vector<AgentState> agents) {
  Ensemble e;
  e.agents = std::move(agents);
  return e;
}

sf::SimParams params_for(const Ensemble& e, double sigma) {
  sf::SimParams p;
  p.n = e.size();
  p.sigma = sigma;
  return p;
}

TEST(Centripetal, Values) {
  EXPECT_EQ(sf::centripetal_force({Vec3(1, 0, 0), Vec3(0, 1, 0)}), Vec3(-1, 0, 0));
  EXPECT_EQ(sf::centripetal_force({Vec3(1, 0, 0), Vec3(0, 0, 0)}), Vec3(0, 0, 0));
  EXPECT_EQ(sf::centripetal_force({Vec3(0, 0, 1), Vec3(2, 0, 0)}), Vec3(0, 0, -4));
}

TEST(Bonding, Values) {
  const Ensemble two = make({{Vec3(1, 0, 0), Vec3::Zero()}, {Vec3(0, 1, 0), Vec3::Zero()}});
  EXPECT_EQ(sf::bonding_force(0, two, 0.0), Vec3::Zero());
  EXPECT_LT((sf::bonding_force(0, two, 1.0) - Vec3(0, 0.5, 0)).norm(), 1e-16);
  const Ensemble same = make({{Vec3(0, 0, 1), Vec3::Zero()}, {Vec3(0, 0, 1), Vec3::Zero()}, {Vec3(0, 0, 1), Vec3::Zero()}});
  EXPECT_EQ(sf::bonding_force(1, same, 5.0), Vec3::Zero());
}

TEST(Bonding, IsTangent) {
  const Ensemble e = sf::random_admissible(12, 4);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_LT(std::abs(sf::bonding_force(i, e, 3.0).dot(e[i].x)), 1e-14);
}

TEST(Alignment, SelfInteractionVanishes) {
  const Ensemble one = make({{Vec3(0, 0, 1), Vec3(1, 0, 0)}});
  EXPECT_EQ(sf::alignment_force(0, one, sf::CommWeight::quadratic()), Vec3::Zero());
}

TEST(Alignment, VanishesOnCircularMotion) {
  const Ensemble e = sf::circular_exact({0.0, 0.4, 1.3, 2.9}, 0.7);
  for (std::size_t i = 0; i < e.size(); ++i)
    EXPECT_LT(sf::alignment_force(i, e, sf::CommWeight::quadratic()).norm(), 1e-15);
}

TEST(Alignment, AntipodalPairContributesNothing) {
  const Ensemble e = make({{Vec3(0, 0, 1), Vec3(1, 0, 0)}, {Vec3(0, 0, -1), Vec3(0, 1, 0)}});
  EXPECT_EQ(sf::alignment_force(0, e, sf::CommWeight::quadratic()), Vec3::Zero());
  EXPECT_EQ(sf::alignment_force(1, e, sf::CommWeight::linear(2.0)), Vec3::Zero());
}

TEST(Alignment, TwoAgentHandValue) {
  // x1 = e_x, x2 = e_y: r^2 = 2, psi = 1/2, R(x2 -> x1) maps e_z to e_z.
  const Ensemble e = make({{Vec3(1, 0, 0), Vec3(0, 0, 1)}, {Vec3(0, 1, 0), Vec3(0, 0, -1)}});
  // (1/2) * (1/2) * (R v2 - v1) = (1/4) * ((0,0,-1) - (0,0,1)).
  EXPECT_LT((sf::alignment_force(0, e, sf::CommWeight::quadratic()) - Vec3(0, 0, -0.5)).norm(), 1e-15);
}

TEST(Rhs, CircularMotionIsPureCentripetal) {
  const Ensemble e = sf::circular_exact({0.0, 1.0, 2.5}, 0.3);
  const auto d = sf::rhs(e, params_for(e, 0.0));
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(d[i].dx, e[i].v);
    EXPECT_LT((d[i].dv + e[i].x).norm(), 1e-15);
  }
}

TEST(Rhs, SingleAgentAtRest) {
  const Ensemble e = make({{Vec3(0, 1, 0), Vec3::Zero()}});
  const auto d = sf::rhs(e, params_for(e, 2.0));
  EXPECT_EQ(d[0].dx, Vec3::Zero());
  EXPECT_EQ(d[0].dv, Vec3::Zero());
}

TEST(Rhs, NormalComponentMatchesSpeed) {
  for (double sigma : {0.0, 1.0, 10.0}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Ensemble e = sf::random_admissible(8, seed, 1.7);
      const auto d = sf::rhs(e, params_for(e, sigma));
      for (std::size_t i = 0; i < e.size(); ++i)
        EXPECT_LT(std::abs(e[i].x.dot(d[i].dv) + e[i].v.squaredNorm()), 1e-9);
    }
  }
}

TEST(Rhs, FiniteAndContinuousThroughAntipodalCutoff) {
  // Approach the antipode along a great circle; the pair term carries
  // psi ~ |x1 + x2|^2, so the force tends to its zero-extended value.
  const Vec3 x1(0, 0, 1);
  const Vec3 v1(0.3, 0.1, 0), v2(-0.2, 0.5, 0);
  sf::SimParams p;
  p.n = 2;
  p.sigma = 0.5;
  auto force = [&](const Vec3& x2) {
    const Ensemble e = make({{x1, v1}, {x2, sf::tangent_project(x2, v2)}});
    return sf::rhs(e, p)[0].dv;
  };
  const Vec3 limit = force(-x1);
  ASSERT_TRUE(sf::is_finite(limit));
  for (int k = 0; k <= 60; ++k) {
    const double gap = std::pow(10.0, -0.2 * k);  // 1 down to 1e-12
    const Vec3 dv = force(testing_support::along(x1, Vec3(1, 0, 0), std::numbers::pi - gap));
    ASSERT_TRUE(sf::is_finite(dv)) << gap;
    if (gap < 1e-2) {
      EXPECT_LT((dv - limit).norm(), gap) << gap;
    }
  }
}

TEST(Rhs, ParallelPathMatchesSerial) {
  const Ensemble e = sf::random_admissible(sf::kParallelAgentThreshold + 40, 2);
  sf::SimParams p = params_for(e, 1.3);
  const auto d = sf::rhs(e, p);
  for (std::size_t i = 0; i < e.size(); i += 37) {
    const Vec3 dv = sf::centripetal_force(e[i]) + sf::alignment_force(i, e, p.weight) + sf::bonding_force(i, e, p.sigma);
    EXPECT_LT((d[i].dv - dv).norm(), 1e-13);
  }
}

TEST(Rhs, RejectsDegeneratePositions) {
  const Ensemble e = make({{Vec3::Zero(), Vec3::Zero()}, {Vec3(0, 0, 1), Vec3::Zero()}});
  EXPECT_THROW(sf::rhs(e, params_for(e, 0.0)), sf::DomainError);
}

}  // namespace
