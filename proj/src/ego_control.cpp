#include "lvt/ego_control.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace lvt {

std::string_view to_string(PolicyId id) {
  switch (id) {
    case PolicyId::MergeIn: return "merge_in";
    case PolicyId::GiveWay: return "give_way";
    case PolicyId::IncreaseSetpoint: return "increase_setpoint";
    case PolicyId::DecreaseSetpoint: return "decrease_setpoint";
    case PolicyId::Maintain: return "maintain";
  }
  return "unknown";
}

std::optional<PolicyId> policy_from_string(std::string_view name) {
  for (PolicyId id : kAllPolicies) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::size_t PolicySet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

PolicyId PolicySet::nth(std::size_t i) const {
  for (PolicyId id : kAllPolicies) {
    if (!contains(id)) continue;
    if (i == 0) return id;
    --i;
  }
  throw std::out_of_range("PolicySet::nth");
}

int EgoConfig::decision_steps() const {
  return static_cast<int>(std::lround(decision_period / dt));
}

PolicySet available_policies(const VehicleState& ego, const EgoControllerState& ctrl,
                             const RoadGeometry& road) {
  PolicySet set;
  if (in_merge_zone(ego, road)) {
    set.insert(PolicyId::MergeIn);
    set.insert(PolicyId::GiveWay);
  }
  if (ctrl.psi_setpoint < 1.0) set.insert(PolicyId::IncreaseSetpoint);
  if (ctrl.psi_setpoint > 0.0) set.insert(PolicyId::DecreaseSetpoint);
  set.insert(PolicyId::Maintain);
  return set;
}

double max_safe_acceleration(double speed, const LeadTarget& target, const EgoConfig& cfg) {
  const double dt = cfg.dt;
  const double b_lead = cfg.lead_worst_brake;
  const double b_ego = cfg.max_brake;

  // Where the target ends up if it brakes as hard as it can from now on.
  const double v_lead_next = std::max(0.0, target.speed - b_lead * dt);
  const double lead_travel = target.speed >= b_lead * dt
                                 ? 0.5 * (target.speed + v_lead_next) * dt
                                 : target.speed * target.speed / (2.0 * b_lead);
  const double lead_stop = target.gap + lead_travel + v_lead_next * v_lead_next / (2.0 * b_lead);

  // Agent end-of-step speed u must satisfy
  //   (speed + u) dt / 2 + u^2 / (2 b_ego) <= lead_stop - margin.
  const double budget = lead_stop - cfg.safety_margin - 0.5 * speed * dt;
  if (budget < 0.0) return -b_ego;
  const double u = b_ego * (-0.5 * dt + std::sqrt(0.25 * dt * dt + 2.0 * budget / b_ego));
  return (u - speed) / dt;
}

double acc_longitudinal(const VehicleState& ego, const std::optional<LeadTarget>& target,
                        double psi, const EgoConfig& cfg, const DriverModelConfig& drivers) {
  const IdmParams p = params_from_aggressiveness(std::clamp(psi, 0.0, 1.0), drivers);
  double acc = 0.0;
  if (!target) {
    acc = idm_free_acceleration(ego.vx, p, drivers.b_hard_physical, drivers.free_road_gap);
  } else {
    const double gap = std::max(target->gap, drivers.min_gap);
    acc = idm_acceleration(ego.vx, gap, ego.vx - target->speed, p, drivers.b_hard_physical);
    acc = std::min(acc, max_safe_acceleration(ego.vx, *target, cfg));
  }
  return std::clamp(acc, -cfg.max_brake, cfg.max_accel);
}

std::optional<LeadTarget> ramp_end_target(const VehicleState& ego, const RoadGeometry& road) {
  if (in_main_corridor(ego, road)) return std::nullopt;
  return LeadTarget{road.merge_point() - ego.x, 0.0};
}

std::optional<std::size_t> select_give_way_target(const Observation& obs) {
  return nearest_behind(obs.ego.x, obs.others);
}

EgoControllerState apply_setpoint_delta(const EgoControllerState& ctrl, int direction,
                                        double step) {
  EgoControllerState next = ctrl;
  next.psi_setpoint = std::clamp(ctrl.psi_setpoint + direction * step, 0.0, 1.0);
  return next;
}

EgoControllerState start_policy(PolicyId policy, const EgoControllerState& ctrl,
                                const Observation& obs, const EgoConfig& cfg) {
  EgoControllerState next = ctrl;
  if (policy == PolicyId::IncreaseSetpoint) next = apply_setpoint_delta(ctrl, +1, cfg.psi_step);
  if (policy == PolicyId::DecreaseSetpoint) next = apply_setpoint_delta(ctrl, -1, cfg.psi_step);
  next.active_policy = policy;
  next.policy_steps = 0;
  next.give_way_target =
      policy == PolicyId::GiveWay ? select_give_way_target(obs) : std::nullopt;
  return next;
}

namespace {

std::optional<LeadTarget> vehicle_target(const VehicleState& ego, const VehicleState& v,
                                         const DriverModelConfig& drivers) {
  return LeadTarget{v.x - ego.x - drivers.vehicle_length, v.vx};
}

std::optional<LeadTarget> main_lane_front(const Observation& obs,
                                          const DriverModelConfig& drivers) {
  const auto front = nearest_ahead(obs.ego.x, obs.others);
  if (!front) return std::nullopt;
  return vehicle_target(obs.ego, obs.others[*front], drivers);
}

bool vehicle_alongside(const Observation& obs, double reach) {
  return std::any_of(obs.others.begin(), obs.others.end(), [&](const VehicleState& v) {
    return std::abs(v.x - obs.ego.x) < reach;
  });
}

// Most restrictive ACC command over several targets.
double acc_over(const VehicleState& ego, std::initializer_list<std::optional<LeadTarget>> targets,
                double psi, const EgoConfig& cfg, const DriverModelConfig& drivers) {
  double acc = acc_longitudinal(ego, std::nullopt, psi, cfg, drivers);
  for (const auto& t : targets) {
    if (t) acc = std::min(acc, acc_longitudinal(ego, t, psi, cfg, drivers));
  }
  return acc;
}

}  // namespace

VehicleAction policy_action(PolicyId policy, const Observation& obs,
                            const EgoControllerState& ctrl, const RoadGeometry& road,
                            const EgoConfig& cfg, const DriverModelConfig& drivers) {
  const VehicleState& ego = obs.ego;
  const double psi = ctrl.psi_setpoint;
  const double toward_main = road.main_lane_center_y > road.ramp_lane_center_y ? 1.0 : -1.0;
  const double progress = lateral_progress(ego, road);
  VehicleAction a;

  switch (policy) {
    case PolicyId::MergeIn: {
      // While crossing over, the ramp end only bounds the speed through the
      // stopping constraint; the agent expects to be in the lane before it.
      a.ax = acc_over(ego, {main_lane_front(obs, drivers)}, psi, cfg, drivers);
      if (const auto wall = ramp_end_target(ego, road)) {
        a.ax = std::max(std::min(a.ax, max_safe_acceleration(ego.vx, *wall, cfg)), -cfg.max_brake);
      }
      const double remaining = std::abs(road.main_lane_center_y - ego.y);
      a.vy = toward_main * std::min(cfg.merge_lateral_speed, remaining / cfg.dt);
      // Never cut into the lane next to a vehicle that is alongside.
      VehicleState next = ego;
      next.y += a.vy * cfg.dt;
      if (!in_main_corridor(ego, road) && in_main_corridor(next, road) &&
          vehicle_alongside(obs, drivers.vehicle_length + cfg.safety_margin)) {
        a.vy = 0.0;
      }
      break;
    }
    case PolicyId::GiveWay: {
      std::optional<LeadTarget> projected;
      if (ctrl.give_way_target && *ctrl.give_way_target < obs.others.size()) {
        projected = vehicle_target(ego, obs.others[*ctrl.give_way_target], drivers);
      }
      const auto lane_front =
          progress > 0.0 ? main_lane_front(obs, drivers) : std::optional<LeadTarget>{};
      a.ax = acc_over(ego, {projected, ramp_end_target(ego, road), lane_front}, psi, cfg,
                      drivers);
      // An abandoned merge steers back to the ramp lane center.
      const double back = std::abs(ego.y - road.ramp_lane_center_y);
      a.vy = progress > 0.0 ? -toward_main * std::min(cfg.merge_lateral_speed, back / cfg.dt)
                            : 0.0;
      break;
    }
    case PolicyId::IncreaseSetpoint:
    case PolicyId::DecreaseSetpoint:
    case PolicyId::Maintain: {
      const auto target =
          in_main_corridor(ego, road) ? main_lane_front(obs, drivers) : ramp_end_target(ego, road);
      a.ax = acc_over(ego, {target}, psi, cfg, drivers);
      a.vy = 0.0;
      break;
    }
  }
  return a;
}

bool policy_terminated(PolicyId policy, const Observation& obs,
                       const EgoControllerState& ctrl, const RoadGeometry& road,
                       const EgoConfig& cfg) {
  switch (policy) {
    case PolicyId::MergeIn:
      return merge_complete(obs.ego, road);
    case PolicyId::GiveWay:
      if (!ctrl.give_way_target || *ctrl.give_way_target >= obs.others.size()) return true;
      return obs.others[*ctrl.give_way_target].x > obs.ego.x;
    case PolicyId::IncreaseSetpoint:
    case PolicyId::DecreaseSetpoint:
    case PolicyId::Maintain:
      return ctrl.policy_steps >= cfg.decision_steps();
  }
  return true;
}

}  // namespace lvt
