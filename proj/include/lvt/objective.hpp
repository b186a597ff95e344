#pragma once

#include <optional>
#include <span>

#include "lvt/kinematics.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

struct RewardWeights {
  double lambda_goal = 5.0;
  double lambda_delay = -0.3;
  double lambda_hard_brakes = -5.0;
  double lambda_safe = -10.0;
  double b_hard = -4.0;   // hard-brake threshold [m/s^2]
  double ttc_min = 3.3;   // [s]
  double tiv_min = 1.3;   // [s]
  double gamma = 0.9;

  bool valid() const;
  double max_step_reward() const { return lambda_goal; }
  double min_step_reward() const { return lambda_delay + lambda_hard_brakes + lambda_safe; }
  /// Bound on any discounted return magnitude.
  double return_bound() const;
};

/// Indicator terms of the reward, OR-accumulated over the simulation steps
/// of one policy execution.
struct StepFlags {
  bool merged = false;
  bool hard_brake = false;
  bool safety_violated = false;

  StepFlags& operator|=(const StepFlags& o) {
    merged = merged || o.merged;
    hard_brake = hard_brake || o.hard_brake;
    safety_violated = safety_violated || o.safety_violated;
    return *this;
  }
};

/// Time to collision of a rear vehicle closing on the agent; +inf if not closing.
double ttc(const VehicleState& ego, const VehicleState& rear);

/// Inter-vehicular time of a rear vehicle; +inf if it is stopped.
double tiv(const VehicleState& ego, const VehicleState& rear);

struct SafetyReading {
  std::optional<std::size_t> rear;  // index of the nearest vehicle at or behind the agent
  double ttc;
  double tiv;
};

/// TTC/TIV against the nearest main-road vehicle at or behind the agent;
/// both +inf when there is none.
SafetyReading safety_reading(const VehicleState& ego, std::span<const VehicleState> others);

bool safety_violated(const SafetyReading& reading, const RewardWeights& w);

/// The TTC/TIV check applies while the agent moves into the main lane: it is
/// in the main-lane corridor and was not yet merged before this step.
bool safety_armed(const VehicleState& ego_before, const VehicleState& ego_after,
                  const RoadGeometry& road);

/// Agent occupies the main lane and overlaps another vehicle longitudinally.
bool ego_collision(const VehicleState& ego, std::span<const VehicleState> others,
                   const RoadGeometry& road, double vehicle_length);

bool hard_brake_any(std::span<const double> accelerations, const RewardWeights& w);

/// Flags of a single simulation step from `before` to `after`, given the
/// accelerations the main-road drivers applied during the step.
StepFlags transition_flags(const TrafficState& before, const TrafficState& after,
                           std::span<const double> other_accelerations,
                           const RoadGeometry& road, const RewardWeights& w,
                           double vehicle_length);

double decision_reward(const StepFlags& flags, const RewardWeights& w);

}  // namespace lvt
