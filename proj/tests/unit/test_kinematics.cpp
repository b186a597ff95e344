#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lvt/errors.hpp"
#include "lvt/kinematics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lvt;

TEST(StepVehicle, ZeroAccelerationIdentity) {
  const VehicleState s = step_vehicle({0, 0, 10}, {0, 0}, 0.1);
  EXPECT_DOUBLE_EQ(s.x, 1.0);
  EXPECT_DOUBLE_EQ(s.y, 0.0);
  EXPECT_DOUBLE_EQ(s.vx, 10.0);
}

TEST(StepVehicle, ConstantAcceleration) {
  const VehicleState s = step_vehicle({0, 0, 10}, {2, 0}, 0.1);
  EXPECT_NEAR(s.x, 1.01, 1e-12);
  EXPECT_NEAR(s.vx, 10.2, 1e-12);
}

TEST(StepVehicle, LateralMergeSpeed) {
  const VehicleState s = step_vehicle({0, 0, 10}, {0, 0.75}, 0.1);
  EXPECT_DOUBLE_EQ(s.x, 1.0);
  EXPECT_NEAR(s.y, 0.075, 1e-12);
}

TEST(StepVehicle, StopsWithinStep) {
  const VehicleState s = step_vehicle({0, 0, 0.3}, {-6, 0}, 0.1);
  EXPECT_EQ(s.vx, 0.0);
  EXPECT_NEAR(s.x, 0.3 * 0.3 / 12.0, 1e-12);
}

TEST(StepVehicle, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(step_vehicle({nan, 0, 1}, {0, 0}, 0.1), InvalidStateError);
  EXPECT_THROW(step_vehicle({0, 0, 1}, {std::numeric_limits<double>::infinity(), 0}, 0.1),
               InvalidStateError);
}

TEST(StepVehicle, MatchesOracleOnRandomInputs) {
  gen::Source g(11);
  for (int i = 0; i < 2000; ++i) {
    const VehicleState s = g.vehicle();
    const VehicleAction a = g.action();
    const VehicleState got = step_vehicle(s, a, 0.1);
    const VehicleState want = oracle::step(s, a.ax, a.vy, 0.1);
    ASSERT_NEAR(got.x, want.x, 1e-9);
    ASSERT_NEAR(got.y, want.y, 1e-12);
    ASSERT_NEAR(got.vx, want.vx, 1e-12);
  }
}

TEST(StepVehicle, HalfStepsComposeWhenNotClamped) {
  gen::Source g(12);
  for (int i = 0; i < 1000; ++i) {
    VehicleState s = g.vehicle();
    VehicleAction a = g.action();
    if (s.vx + a.ax * 0.1 < 0.0) a.ax = -s.vx / 0.1 * g.uniform(0.0, 1.0);
    const VehicleState one = step_vehicle(s, a, 0.1);
    const VehicleState two = step_vehicle(step_vehicle(s, a, 0.05), a, 0.05);
    ASSERT_NEAR(one.x, two.x, 1e-9);
    ASSERT_NEAR(one.vx, two.vx, 1e-9);
    ASSERT_NEAR(one.y, two.y, 1e-12);
  }
}

TEST(StepVehicle, SpeedNeverNegative) {
  gen::Source g(13);
  for (int i = 0; i < 5000; ++i) {
    ASSERT_GE(step_vehicle(g.vehicle(), g.action(), 0.1).vx, 0.0);
  }
}

TEST(Road, MergeZoneBoundsInclusive) {
  const RoadGeometry road;
  EXPECT_TRUE(in_merge_zone({150, 0, 10}, road));
  EXPECT_FALSE(in_merge_zone({50, 0, 10}, road));
  EXPECT_TRUE(in_merge_zone({200, 0, 10}, road));
  EXPECT_TRUE(in_merge_zone({100, 0, 10}, road));
  EXPECT_FALSE(in_merge_zone({200.01, 0, 10}, road));
}

TEST(Road, MergeCompleteTolerance) {
  const RoadGeometry road;
  EXPECT_TRUE(merge_complete({150, 3.7, 10}, road));
  EXPECT_FALSE(merge_complete({150, 0.0, 10}, road));
  EXPECT_TRUE(merge_complete({150, 3.7 - 0.05, 10}, road));
  EXPECT_FALSE(merge_complete({150, 3.7 - 0.1, 10}, road));
  EXPECT_TRUE(merge_complete({150, 3.7 - 0.09, 10}, road, 0.1));
}

TEST(Road, CorridorAtHalfwayLine) {
  const RoadGeometry road;
  EXPECT_DOUBLE_EQ(lateral_progress({0, 1.85, 0}, road), 0.5);
  EXPECT_TRUE(in_main_corridor({0, 1.85, 0}, road));
  EXPECT_FALSE(in_main_corridor({0, 1.84, 0}, road));
}

TEST(Road, ValidateRejectsBadGeometry) {
  RoadGeometry road;
  road.merge_zone_length = 300;
  EXPECT_THROW(road.validate(), ConfigError);
  road = RoadGeometry{};
  road.main_lane_center_y = road.ramp_lane_center_y;
  EXPECT_THROW(road.validate(), ConfigError);
  EXPECT_NO_THROW(RoadGeometry{}.validate());
}
