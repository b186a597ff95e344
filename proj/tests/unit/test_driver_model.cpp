#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lvt/driver_model.hpp"
#include "lvt/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lvt;

namespace {
const IdmParams kParams{25.0, 2.0, 1.5, 1.5, 2.0};
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST(IdmDesiredGap, Examples) {
  EXPECT_DOUBLE_EQ(idm_desired_gap(0, 0, kParams), 2.0);
  EXPECT_NEAR(idm_desired_gap(20, 0, kParams), 32.0, 1e-12);
  EXPECT_NEAR(idm_desired_gap(20, 5, kParams), 32.0 + 100.0 / (2.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(idm_desired_gap(20, 5, kParams), 60.868, 1e-3);
}

TEST(IdmAcceleration, Examples) {
  EXPECT_NEAR(idm_acceleration(25, 1e9, 0, kParams), 0.0, 1e-6);
  EXPECT_NEAR(idm_acceleration(0, 1e9, 0, kParams), 1.5, 1e-9);
  const double q = 32.0 / 30.0;
  EXPECT_NEAR(idm_acceleration(20, 30, 0, kParams), 1.5 * (1 - 0.4096 - q * q), 1e-12);
  EXPECT_NEAR(idm_acceleration(20, 30, 0, kParams), -0.8211, 1e-4);
}

TEST(IdmAcceleration, RejectsNonPositiveGap) {
  EXPECT_THROW(idm_acceleration(10, 0.0, 0, kParams), ModelDomainError);
  EXPECT_THROW(idm_acceleration(10, -1.0, 0, kParams), ModelDomainError);
}

TEST(IdmAcceleration, ClampedToPhysicalLimit) {
  EXPECT_DOUBLE_EQ(idm_acceleration(30, 0.5, 10, kParams, 9.0), -9.0);
}

TEST(IdmAcceleration, MatchesOracleOnRandomInputs) {
  gen::Source g(21);
  for (int i = 0; i < 2000; ++i) {
    const IdmParams p = g.idm_params();
    const double v = g.uniform(0, 35), gap = g.uniform(0.5, 200), dv = g.uniform(-10, 10);
    ASSERT_NEAR(idm_desired_gap(v, dv, p), oracle::desired_gap(v, dv, p), 1e-9);
    ASSERT_NEAR(idm_acceleration(v, gap, dv, p), oracle::idm(v, gap, dv, p), 1e-9);
  }
}

TEST(IdmAcceleration, NonDecreasingInGap) {
  gen::Source g(22);
  for (int i = 0; i < 2000; ++i) {
    const IdmParams p = g.idm_params();
    const double v = g.uniform(0, 35), dv = g.uniform(-10, 10);
    const double gap = g.uniform(0.5, 200);
    const double wider = gap + g.uniform(0.0, 50.0);
    ASSERT_LE(idm_acceleration(v, gap, dv, p), idm_acceleration(v, wider, dv, p) + 1e-12);
  }
}

TEST(IdmAcceleration, FollowerSettlesAtDesiredGap) {
  gen::Source g(23);
  for (int trial = 0; trial < 20; ++trial) {
    const IdmParams p = params_from_aggressiveness(g.uniform(0, 1));
    // Slow leaders keep (v/v_des)^4 small, so the fixed point sits next to d_des.
    const double v_lead = g.uniform(2.0, 0.3 * p.v_des);
    VehicleState lead{200, 0, v_lead};
    VehicleState follow{200 - g.uniform(20, 120), 0, g.uniform(0, 25)};
    for (int k = 0; k < 20000; ++k) {
      const double a = idm_acceleration(follow.vx, lead.x - follow.x, follow.vx - lead.vx, p);
      follow = step_vehicle(follow, {a, 0}, 0.1);
      lead = step_vehicle(lead, {0, 0}, 0.1);
    }
    const double gap = lead.x - follow.x;
    const double d_des = idm_desired_gap(v_lead, 0, p);
    ASSERT_NEAR(gap, d_des, 0.01 * d_des) << "trial " << trial;
    const double r = v_lead / p.v_des;
    ASSERT_NEAR(gap, d_des / std::sqrt(1 - r * r * r * r), 1e-6) << "trial " << trial;
  }
}

TEST(CidmMode, Examples) {
  EXPECT_EQ(cidm_mode(3, 8, 0.5), CidmMode::Yielding);
  EXPECT_EQ(cidm_mode(3, 5, 0.5), CidmMode::Passing);
  EXPECT_EQ(cidm_mode(0.0, 100, 1.0), CidmMode::Passing);
}

TEST(CidmMode, ExtremesOfAggressiveness) {
  gen::Source g(24);
  for (int i = 0; i < 2000; ++i) {
    const double te = g.uniform(0, 20), tv = g.coin(0.1) ? kInf : g.uniform(0, 20);
    ASSERT_EQ(cidm_mode(te, tv, 1.0), CidmMode::Passing);
    ASSERT_EQ(cidm_mode(te, tv, 0.0) == CidmMode::Yielding, te < tv);
  }
}

TEST(MixedAcceleration, Examples) {
  EXPECT_DOUBLE_EQ(mixed_acceleration(-0.8, 123.0, 1, 0), -0.8);
  EXPECT_DOUBLE_EQ(mixed_acceleration(0.5, -1.0, 1, 1), -0.5);
  EXPECT_DOUBLE_EQ(mixed_acceleration(0.5, -1.0, 0, 0), 0.0);
}

TEST(Aggressiveness, AnchorsAndMidpoint) {
  const DriverModelConfig c;
  const IdmParams lo = params_from_aggressiveness(0.0, c);
  const IdmParams hi = params_from_aggressiveness(1.0, c);
  const IdmParams mid = params_from_aggressiveness(0.5, c);
  EXPECT_DOUBLE_EQ(lo.v_des, 19.4);
  EXPECT_DOUBLE_EQ(lo.d_min, 4.0);
  EXPECT_DOUBLE_EQ(lo.t_des, 2.0);
  EXPECT_DOUBLE_EQ(lo.a_max, 0.8);
  EXPECT_DOUBLE_EQ(lo.b_max, 1.0);
  EXPECT_DOUBLE_EQ(hi.v_des, 30.0);
  EXPECT_DOUBLE_EQ(hi.d_min, 1.0);
  EXPECT_DOUBLE_EQ(hi.t_des, 0.5);
  EXPECT_DOUBLE_EQ(hi.a_max, 2.0);
  EXPECT_DOUBLE_EQ(hi.b_max, 3.0);
  EXPECT_DOUBLE_EQ(mid.v_des, 24.7);
  EXPECT_DOUBLE_EQ(mid.d_min, 2.5);
  EXPECT_DOUBLE_EQ(mid.t_des, 1.25);
  EXPECT_DOUBLE_EQ(mid.a_max, 1.4);
  EXPECT_DOUBLE_EQ(mid.b_max, 2.0);
}

TEST(Aggressiveness, RejectsOutOfRange) {
  EXPECT_THROW(params_from_aggressiveness(-0.01), ModelDomainError);
  EXPECT_THROW(params_from_aggressiveness(1.01), ModelDomainError);
}

TEST(Aggressiveness, ValidAndCappedEverywhere) {
  gen::Source g(25);
  DriverModelConfig c;
  c.speed_cap = 27.0;
  for (int i = 0; i < 500; ++i) {
    const double psi = g.uniform(0, 1);
    const IdmParams p = params_from_aggressiveness(psi, c);
    ASSERT_TRUE(p.valid());
    ASSERT_LE(p.v_des, 27.0);
    const InternalState s = internal_from_aggressiveness(psi, c);
    ASSERT_EQ(s.w_l, 1.0);
    ASSERT_EQ(s.psi, psi);
  }
}

TEST(TimeToMerge, Examples) {
  const RoadGeometry road;
  EXPECT_EQ(agent_time_to_merge({200, 0, 10}, road), 0.0);
  EXPECT_DOUBLE_EQ(agent_time_to_merge({140, 0, 20}, road), 3.0);
  EXPECT_EQ(agent_time_to_merge({140, 0, 0}, road), kInf);
  EXPECT_EQ(vehicle_time_to_merge({200, 3.7, 10}, road), 0.0);
  EXPECT_DOUBLE_EQ(vehicle_time_to_merge({140, 3.7, 20}, road), 3.0);
  EXPECT_EQ(vehicle_time_to_merge({210, 3.7, 20}, road), kInf);
  EXPECT_EQ(vehicle_time_to_merge({140, 3.7, 0.05}, road), kInf);
}

TEST(DriverAction, AloneIsPlainIdm) {
  const RoadGeometry road;
  const InternalState s = internal_from_aggressiveness(0.5);
  const VehicleState ego{0, 0, 0};  // far behind every vehicle: never a yielding target
  const std::vector<VehicleState> others{{250, 3.7, 20}, {200, 3.7, 22}};
  const double lead = driver_action(0, ego, others, s, road).ax;
  EXPECT_NEAR(lead, oracle::idm(20, 1e9, 0, s.idm), 1e-12);
  const double follow = driver_action(1, ego, others, s, road).ax;
  EXPECT_NEAR(follow, oracle::idm(22, 45, 2, s.idm), 1e-12);
}

TEST(DriverAction, PassingIgnoresAgent) {
  const RoadGeometry road;
  const InternalState s = internal_from_aggressiveness(0.5);
  // Agent slow and far from the merge point, vehicle close to it: passing.
  const VehicleState ego{120, 0, 2};
  const std::vector<VehicleState> others{{100, 3.7, 20}};
  ASSERT_EQ(driver_mode(0, ego, others, 0.5, road), CidmMode::Passing);
  EXPECT_NEAR(driver_action(0, ego, others, s, road).ax, oracle::idm(20, 1e9, 0, s.idm), 1e-12);
}

TEST(DriverAction, YieldingMixesTwoIdmTerms) {
  const RoadGeometry road;
  const InternalState s = internal_from_aggressiveness(0.2);
  // Agent projected 20 m ahead at lower speed, about to reach the merge point.
  const VehicleState ego{180, 0, 15};
  const std::vector<VehicleState> others{{160, 3.7, 20}};
  ASSERT_EQ(driver_mode(0, ego, others, 0.2, road), CidmMode::Yielding);
  const double leader = oracle::idm(20, 1e9, 0, s.idm);
  const double merge = oracle::idm(20, 20 - 5.0, 5, s.idm);
  const double want = std::clamp(leader + merge, -9.0, s.idm.a_max);
  const double got = driver_action(0, ego, others, s, road).ax;
  EXPECT_NEAR(got, want, 1e-12);
  EXPECT_LT(got, 0.0);
}

TEST(DriverAction, InattentiveDriverIgnoresAgent) {
  const RoadGeometry road;
  InternalState s = internal_from_aggressiveness(0.2);
  s.w_m = 0.0;
  const VehicleState ego{180, 0, 15};
  const std::vector<VehicleState> others{{160, 3.7, 20}};
  EXPECT_NEAR(driver_action(0, ego, others, s, road).ax, oracle::idm(20, 1e9, 0, s.idm), 1e-12);
}

TEST(DriverAction, AgentInLaneIsFrontNeighbor) {
  const RoadGeometry road;
  const InternalState s = internal_from_aggressiveness(0.5);
  const VehicleState ego{180, 3.0, 15};
  const std::vector<VehicleState> others{{250, 3.7, 20}, {160, 3.7, 20}};
  EXPECT_NEAR(driver_action(1, ego, others, s, road).ax, oracle::idm(20, 15, 5, s.idm), 1e-12);
}

TEST(DriverAction, MatchesOracleOnRandomScenes) {
  const RoadGeometry road;
  DriverModelConfig c;
  c.strict_gaps = false;
  gen::Source g(26);
  for (int i = 0; i < 3000; ++i) {
    const Observation o = g.merge_observation(road, g.integer(1, 6));
    const std::size_t idx = static_cast<std::size_t>(g.integer(0, static_cast<int>(o.others.size()) - 1));
    const double psi = g.integer(0, 10) / 10.0;
    const bool attentive = g.coin();
    InternalState s = internal_from_aggressiveness(psi, c);
    s.w_m = attentive ? 1.0 : 0.0;
    ASSERT_NEAR(driver_action(idx, o.ego, o.others, s, road, c).ax,
                oracle::cidm(idx, o, psi, attentive, road, c), 1e-9);
  }
}
