#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sphereflock/diagnostics.hpp"
#include "sphereflock/dynamics.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/scenarios.hpp"

namespace sf = sphereflock;
using sf::Ensemble;
using sf::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

TEST(RandomAdmissible, ConstraintsAndDeterminism) {
  const Ensemble a = sf::random_admissible(50, 12);
  const Ensemble b = sf::random_admissible(50, 12);
  EXPECT_TRUE(sf::check_admissible(a, 1e-14).empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].v, b[i].v);
  }
  EXPECT_NE(sf::random_admissible(50, 13)[0].x, a[0].x);
}

TEST(RandomAdmissible, UnitSpeedGivesUnitKineticEnergy) {
  EXPECT_NEAR(sf::energy(sf::random_admissible(1000, 1), 0.0).kinetic, 1.0, 1e-12);
}

TEST(RandomAdmissible, Errors) { EXPECT_THROW(sf::random_admissible(0, 1), sf::DomainError); }

TEST(CircularExact, ClosedFormValues) {
  const Ensemble a = sf::circular_exact({0.0}, 0.0);
  EXPECT_EQ(a[0].x, Vec3(1, 0, 0));
  EXPECT_EQ(a[0].v, Vec3(0, 1, 0));
  const Ensemble b = sf::circular_exact({0.0}, kPi / 2.0);
  EXPECT_LT((b[0].x - Vec3(0, 1, 0)).norm(), 1e-15);
  EXPECT_LT((b[0].v - Vec3(-1, 0, 0)).norm(), 1e-15);
  EXPECT_THROW(sf::circular_exact({kPi}, 0.0), sf::DomainError);
  EXPECT_THROW(sf::circular_exact({-0.1}, 0.0), sf::DomainError);
}

TEST(CircularExact, SolvesTheOdeAtRandomTimes) {
  // dx/dt = v and dv/dt = -x for the closed form.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  const std::vector<double> phases{0.0, 0.9, 2.2, 3.0};
  sf::SimParams p;
  p.n = phases.size();
  for (int k = 0; k < 100; ++k) {
    const double t = time(rng);
    const Ensemble e = sf::circular_exact(phases, t);
    EXPECT_TRUE(sf::check_admissible(e, 1e-14).empty());
    const auto d = sf::rhs(e, p);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Vec3 dv(-std::cos(t + phases[i]), -std::sin(t + phases[i]), 0.0);
      EXPECT_LT((d[i].dx - e[i].v).norm(), 1e-12);
      EXPECT_LT((d[i].dv - dv).norm(), 1e-12);
    }
  }
}

TEST(AntipodalApproach, MarginAtTenthMatchesDirectEvaluation) {
  const auto s = sf::antipodal_approach_state(0.1);
  const double expected = std::sqrt(2.0 - 2.0 * std::sqrt(1.0 - 1e-4));
  EXPECT_NEAR((s.x1 + s.x2).norm(), expected, 1e-14);
  EXPECT_NEAR((s.x1 + s.x2).norm(), 0.01, 0.01 * 0.01);
  EXPECT_EQ(s.x2, Vec3(0, 0, 1));
}

TEST(AntipodalApproach, SpeedMatchesClosedForm) {
  for (double t : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9}) {
    const double t4 = t * t * t * t;
    const double exact = 0.5 * std::sqrt(t * (t4 - 16.0 * t - 1.0) / (t4 - 1.0));
    EXPECT_NEAR(sf::antipodal_approach_state(t).v1.norm(), exact, 1e-14 * exact) << t;
  }
}

TEST(AntipodalApproach, AsymptoticRates) {
  for (double t = 1e-3; t <= 1e-2 + 1e-15; t += 1e-3) {
    const auto s = sf::antipodal_approach_state(t);
    EXPECT_NEAR((s.x1 + s.x2).norm() / (t * t), 1.0, 0.02) << t;
    // |v1| = (sqrt(t)/2) sqrt(1 + 16 t) + O(t^5): the leading term is within
    // 2% only up to t = 2.5e-3, beyond that the relative gap is about 8t.
    const double rel = s.v1.norm() / (std::sqrt(t) / 2.0) - 1.0;
    EXPECT_GT(rel, 0.0) << t;
    EXPECT_LT(rel, 8.0 * t) << t;
    if (t <= 2.5e-3) {
      EXPECT_LT(rel, 0.02) << t;
    }
  }
}

TEST(AntipodalApproach, VelocityIsDerivativeOfPosition) {
  const double h = 1e-6;
  for (double t : {0.01, 0.05, 0.1, 0.3, 0.5, 0.8}) {
    const Vec3 fd = (sf::antipodal_approach_state(t + h).x1 - sf::antipodal_approach_state(t - h).x1) / (2.0 * h);
    const Vec3 v = sf::antipodal_approach_state(t).v1;
    EXPECT_LT((fd - v).norm(), 1e-6 * std::max(1.0, v.norm())) << t;
  }
}

TEST(AntipodalApproach, StaysOnSphereAndTangent) {
  for (double t : {1e-4, 0.01, 0.2, 0.9}) {
    const auto s = sf::antipodal_approach_state(t);
    EXPECT_NEAR(s.x1.norm(), 1.0, 1e-14);
    EXPECT_LT(std::abs(s.x1.dot(s.v1)), 1e-12);
  }
  EXPECT_THROW(sf::antipodal_approach_state(0.0), sf::DomainError);
  EXPECT_THROW(sf::antipodal_approach_state(1.0), sf::DomainError);
}

TEST(AntipodalApproach, TrajectorySampling) {
  const auto traj = sf::antipodal_approach_trajectory(0.01, 0.02, 1e-3);
  ASSERT_EQ(traj.samples.size(), 11u);
  EXPECT_NEAR(traj.back().state.t, 0.02, 1e-15);
  EXPECT_TRUE(sf::check_admissible(traj.samples[4].state, 1e-12).empty());
}

TEST(CapClustered, InsideCapAndAdmissible) {
  const Vec3 center = Vec3(1, 1, 0).normalized();
  const Ensemble e = sf::cap_clustered(200, center, 0.4, 3, 0.25);
  EXPECT_TRUE(sf::check_admissible(e, 1e-14).empty());
  for (const auto& a : e.agents) {
    EXPECT_GE(a.x.dot(center), std::cos(0.4) - 1e-14);
    EXPECT_NEAR(a.v.norm(), 0.25, 1e-14);
  }
}

TEST(CapClustered, DegenerateCases) {
  const Ensemble tiny = sf::cap_clustered(10, Vec3::UnitZ(), 1e-9, 1, 0.1);
  for (const auto& a : tiny.agents) EXPECT_LT((a.x - Vec3::UnitZ()).norm(), 1e-8);
  const Ensemble still = sf::cap_clustered(6, Vec3::UnitZ(), 0.5, 1, 0.0);
  EXPECT_EQ(sf::energy(still, 2.0).kinetic, 0.0);
  EXPECT_EQ(sf::energy(still, 2.0).total, sf::energy(still, 2.0).configuration);
  EXPECT_THROW(sf::cap_clustered(3, Vec3::UnitZ(), 2.0, 1), sf::DomainError);
  EXPECT_THROW(sf::cap_clustered(3, Vec3::Zero(), 0.3, 1), sf::DomainError);
}

TEST(CapClustered, SmallCapSatisfiesFlockingCondition) {
  const Ensemble e = sf::cap_clustered(5, Vec3::UnitZ(), 0.3, 1, 0.1);
  EXPECT_TRUE(sf::flocking_condition(5, sf::energy(e, 10.0).total, 10.0));
}

TEST(ThresholdSigma, SolvesFixedPoint) {
  const Ensemble e = sf::cap_clustered(5, Vec3::UnitZ(), 0.3, 1, 0.1);
  for (double factor : {1.01, 1.5, 3.0}) {
    const double sigma = sf::threshold_sigma(e, factor);
    EXPECT_NEAR(sigma, factor * 25.0 * sf::energy(e, sigma).total / 2.0, 1e-12 * sigma);
    EXPECT_EQ(sf::flocking_condition(5, sf::energy(e, sigma).total, sigma), factor > 1.0);
  }
  // Too widely spread to reach the threshold at any sigma.
  EXPECT_THROW(sf::threshold_sigma(sf::random_admissible(10, 1), 1.5), sf::ConfigError);
}

TEST(BuildScenario, Kinds) {
  sf::ScenarioSpec s;
  s.kind = sf::ScenarioSpec::Kind::circular_exact;
  s.phases = {0.0, 1.0};
  s.n = 2;
  EXPECT_EQ(sf::build_scenario(s).size(), 2u);
  s.n = 3;
  EXPECT_THROW(sf::build_scenario(s), sf::ConfigError);
  s.kind = sf::ScenarioSpec::Kind::antipodal_approach;
  s.n = 2;
  EXPECT_TRUE(sf::check_admissible(sf::build_scenario(s), 1e-12).empty());
  EXPECT_EQ(sf::scenario_kind_from_string("cap-clustered"), sf::ScenarioSpec::Kind::cap_clustered);
  EXPECT_THROW(sf::scenario_kind_from_string("nope"), sf::ConfigError);
}

}  // namespace
