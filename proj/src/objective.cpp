#include "lvt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvt {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool RewardWeights::valid() const {
  return lambda_goal > 0.0 && lambda_delay <= 0.0 && lambda_hard_brakes <= 0.0 &&
         lambda_safe <= 0.0 && gamma > 0.0 && gamma < 1.0 && ttc_min > 0.0 && tiv_min > 0.0;
}

double RewardWeights::return_bound() const {
  return std::max(std::abs(max_step_reward()), std::abs(min_step_reward())) / (1.0 - gamma);
}

double ttc(const VehicleState& ego, const VehicleState& rear) {
  const double closing = rear.vx - ego.vx;
  if (!(closing > 0.0)) return kInf;
  return (ego.x - rear.x) / closing;
}

double tiv(const VehicleState& ego, const VehicleState& rear) {
  if (rear.vx == 0.0) return kInf;
  return (ego.x - rear.x) / rear.vx;
}

SafetyReading safety_reading(const VehicleState& ego, std::span<const VehicleState> others) {
  SafetyReading r{nearest_behind(ego.x, others), kInf, kInf};
  if (r.rear) {
    r.ttc = ttc(ego, others[*r.rear]);
    r.tiv = tiv(ego, others[*r.rear]);
  }
  return r;
}

bool safety_violated(const SafetyReading& reading, const RewardWeights& w) {
  if (!reading.rear) return false;
  return reading.ttc < w.ttc_min || reading.tiv < w.tiv_min;
}

bool safety_armed(const VehicleState& ego_before, const VehicleState& ego_after,
                  const RoadGeometry& road) {
  return in_main_corridor(ego_after, road) && !merge_complete(ego_before, road);
}

bool ego_collision(const VehicleState& ego, std::span<const VehicleState> others,
                   const RoadGeometry& road, double vehicle_length) {
  if (!in_main_corridor(ego, road)) return false;
  return std::any_of(others.begin(), others.end(), [&](const VehicleState& v) {
    return std::abs(v.x - ego.x) < vehicle_length;
  });
}

bool hard_brake_any(std::span<const double> accelerations, const RewardWeights& w) {
  return std::any_of(accelerations.begin(), accelerations.end(),
                     [&](double a) { return a <= w.b_hard; });
}

StepFlags transition_flags(const TrafficState& before, const TrafficState& after,
                           std::span<const double> other_accelerations,
                           const RoadGeometry& road, const RewardWeights& w,
                           double vehicle_length) {
  StepFlags f;
  f.merged = merge_complete(after.ego, road) && !merge_complete(before.ego, road);
  f.hard_brake = hard_brake_any(other_accelerations, w);
  if (safety_armed(before.ego, after.ego, road)) {
    f.safety_violated = safety_violated(safety_reading(after.ego, after.others), w);
  }
  f.safety_violated =
      f.safety_violated || ego_collision(after.ego, after.others, road, vehicle_length);
  return f;
}

double decision_reward(const StepFlags& flags, const RewardWeights& w) {
  double r = flags.merged ? w.lambda_goal : w.lambda_delay;
  if (flags.hard_brake) r += w.lambda_hard_brakes;
  if (flags.safety_violated) r += w.lambda_safe;
  return r;
}

}  // namespace lvt
