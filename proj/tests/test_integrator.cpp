#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sphereflock/checks.hpp"
#include "sphereflock/integrator.hpp"
#include "sphereflock/scenarios.hpp"

namespace sf = sphereflock;
using sf::Ensemble;
using sf::Vec3;

namespace {

const std::vector<double> kPhases{0.0, std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};

sf::SimParams circular_params(double dt) {
  sf::SimParams p;
  p.n = 3;
  p.dt = dt;
  return p;
}

double position_error(const Ensemble& e, double t) {
  double err = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    err = std::max(err, (e[i].x - Vec3(std::cos(t + kPhases[i]), std::sin(t + kPhases[i]), 0)).norm());
  return err;
}

TEST(CheckAdmissible, Cases) {
  EXPECT_TRUE(sf::check_admissible(sf::circular_exact(kPhases, 0.0), 1e-14).empty());
  Ensemble bad;
  bad.agents = {{Vec3(1, 0, 0), Vec3(1, 0, 0)}, {Vec3(2, 0, 0), Vec3(0, 1, 0)}};
  const auto v = sf::check_admissible(bad, 1e-9);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].agent, 0u);
  EXPECT_DOUBLE_EQ(v[0].tangency_residual, 1.0);
  EXPECT_EQ(v[1].agent, 1u);
  EXPECT_DOUBLE_EQ(v[1].norm_residual, 1.0);
}

TEST(Project, RestoresConstraints) {
  const Ensemble good = sf::random_admissible(5, 1);
  const Ensemble same = sf::project(good);
  for (std::size_t i = 0; i < good.size(); ++i) {
    EXPECT_LT((same[i].x - good[i].x).norm(), 1e-15);
    EXPECT_LT((same[i].v - good[i].v).norm(), 1e-15);
  }
  Ensemble off;
  off.agents = {{Vec3(1 + 1e-6, 0, 0), Vec3(1e-6, 1, 0)}};
  const Ensemble fixed = sf::project(off);
  EXPECT_NEAR(fixed[0].x.norm(), 1.0, 1e-16);
  EXPECT_LT(std::abs(fixed[0].x.dot(fixed[0].v)), 1e-15);
}

TEST(Project, FlagsBlowup) {
  Ensemble e;
  e.agents = {{Vec3(0.1, 0, 0), Vec3::Zero()}};
  EXPECT_THROW(sf::project(e), sf::BlowupError);
  e.agents = {{Vec3(NAN, 0, 1), Vec3::Zero()}};
  EXPECT_THROW(sf::project(e), sf::BlowupError);
}

TEST(StepRk4, OneStepOnCircle) {
  const Ensemble next = sf::step_rk4(sf::circular_exact(kPhases, 0.0), circular_params(1e-3));
  EXPECT_DOUBLE_EQ(next.t, 1e-3);
  EXPECT_LT(position_error(next, 1e-3), 1e-12);
}

TEST(StepRk4, RestIsFixedPoint) {
  Ensemble e = sf::random_admissible(4, 2, 0.0);
  sf::SimParams p;
  p.n = 4;
  const Ensemble next = sf::step_rk4(e, p);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_LT((next[i].x - e[i].x).norm(), 1e-15);
    EXPECT_EQ(next[i].v, Vec3::Zero());
  }
}

TEST(StepRk4, LocalErrorIsFifthOrder) {
  // Large steps keep the local error well above rounding.
  std::vector<double> errs;
  for (double dt : {0.2, 0.1, 0.05}) errs.push_back(position_error(sf::step_rk4(sf::circular_exact(kPhases, 0.0), circular_params(dt)), dt));
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double ratio = errs[k] / errs[k + 1];
    EXPECT_GT(ratio, 24.0);
    EXPECT_LT(ratio, 40.0);
  }
}

TEST(StepCount, WholeSteps) {
  sf::SimParams p;
  p.dt = 1e-3;
  p.t_end = 8.0;
  EXPECT_EQ(sf::step_count(p), 8000u);
  p.dt = 0.1;
  p.t_end = 0.3;
  EXPECT_EQ(sf::step_count(p), 3u);
  p.t_end = 0.0;
  EXPECT_EQ(sf::step_count(p), 0u);
}

TEST(Simulate, ZeroHorizonKeepsInitialSample) {
  sf::SimParams p = circular_params(1e-3);
  p.t_end = 0.0;
  const auto traj = sf::simulate(sf::circular_exact(kPhases, 0.0), p);
  ASSERT_EQ(traj.samples.size(), 1u);
  EXPECT_EQ(traj.front().state.t, 0.0);
}

TEST(Simulate, SamplesAtRecordCadence) {
  sf::SimParams p = circular_params(1e-3);
  p.t_end = 1.0;
  p.record_every = 100;
  const auto traj = sf::simulate(sf::circular_exact(kPhases, 0.0), p);
  ASSERT_EQ(traj.samples.size(), 11u);
  for (std::size_t k = 0; k < traj.samples.size(); ++k) EXPECT_DOUBLE_EQ(traj.samples[k].state.t, 0.1 * k);
}

TEST(Simulate, SpacingStaysUniformWhenHorizonIsNotAMultiple) {
  sf::SimParams p = circular_params(1e-2);
  p.t_end = 1.05;
  p.record_every = 10;
  const auto traj = sf::simulate(sf::circular_exact(kPhases, 0.0), p);
  ASSERT_EQ(traj.samples.size(), 11u);
  EXPECT_NEAR(traj.back().state.t, 1.0, 1e-12);
}

TEST(Simulate, CircularOracle) {
  sf::SimParams p = circular_params(1e-3);
  p.t_end = 8.0;
  const auto traj = sf::simulate(sf::circular_exact(kPhases, 0.0), p);
  ASSERT_TRUE(traj.ok());
  for (const auto& s : traj.samples) {
    EXPECT_LT(position_error(s.state, s.state.t), 1e-9);
    EXPECT_LT(s.diag.flock_metric, 1e-12);
  }
}

TEST(Simulate, GlobalErrorIsFourthOrder) {
  std::vector<double> logs_dt, logs_err;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    sf::SimParams p = circular_params(dt);
    p.t_end = 8.0;
    p.record_every = 1;
    double err = 0.0;
    for (const auto& s : sf::simulate(sf::circular_exact(kPhases, 0.0), p).samples)
      err = std::max(err, position_error(s.state, s.state.t));
    logs_dt.push_back(std::log(dt));
    logs_err.push_back(std::log(err));
  }
  const double order = (logs_err.front() - logs_err.back()) / (logs_dt.front() - logs_dt.back());
  EXPECT_GE(order, 3.7);
  EXPECT_LE(order, 4.3);
}

TEST(Simulate, RandomAboveThresholdFlocks) {
  // Uniform draws are usually too spread for any sigma to clear the
  // threshold; take the first seed for which one exists.
  Ensemble e0;
  for (std::uint64_t seed = 0;; ++seed) {
    e0 = sf::random_admissible(3, seed, 0.5);
    try {
      sf::threshold_sigma(e0, 2.0);
      break;
    } catch (const sf::ConfigError&) {
    }
  }
  sf::SimParams p;
  p.n = 3;
  p.sigma = sf::threshold_sigma(e0, 2.0);
  p.t_end = 50.0;
  const auto traj = sf::simulate(e0, p);
  ASSERT_TRUE(traj.ok());
  EXPECT_TRUE(sf::flocking_condition(3, sf::initial_energy(traj), p.sigma));
  EXPECT_LT(traj.back().diag.flock_metric, 1e-3);
}

TEST(Simulate, PropertiesAlongRandomRuns) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (double sigma : {0.0, 2.0}) {
      sf::SimParams p;
      p.n = 6;
      p.sigma = sigma;
      p.t_end = 5.0;
      p.record_every = 1;
      const auto traj = sf::simulate(sf::random_admissible(6, seed), p);
      ASSERT_TRUE(traj.ok());
      EXPECT_TRUE(sf::constraint_check(traj).pass);
      EXPECT_TRUE(sf::energy_monotone_check(traj).pass);
      EXPECT_TRUE(sf::speed_bound_check(traj).pass);
      for (const auto& s : traj.samples) {
        const auto& st = s.state;
        for (std::size_t i = 0; i < st.size(); ++i)
          for (std::size_t j = 0; j < st.size(); ++j)
            EXPECT_NEAR((st[i].x - st[j].x).squaredNorm() + (st[i].x + st[j].x).squaredNorm(), 4.0, 1e-12);
      }
    }
  }
}

TEST(Simulate, RejectsBadInput) {
  Ensemble bad;
  bad.agents = {{Vec3(1, 0, 0), Vec3(1, 0, 0)}};
  sf::SimParams p;
  p.n = 1;
  EXPECT_THROW(sf::simulate(bad, p), sf::AdmissibilityError);
  p.n = 2;
  EXPECT_THROW(sf::simulate(sf::random_admissible(1, 0), p), sf::ConfigError);
  p.n = 1;
  p.dt = -1.0;
  EXPECT_THROW(sf::simulate(sf::random_admissible(1, 0), p), sf::ConfigError);
}

TEST(Simulate, ObserverSeesEverySample) {
  sf::SimParams p = circular_params(1e-2);
  p.t_end = 1.0;
  p.record_every = 10;
  std::size_t seen = 0;
  const auto traj = sf::simulate(sf::circular_exact(kPhases, 0.0), p, [&](const sf::Sample&) { ++seen; });
  EXPECT_EQ(seen, traj.samples.size());
}

}  // namespace
