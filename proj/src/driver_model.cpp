#include "lvt/driver_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "lvt/errors.hpp"

namespace lvt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow4(double r) {
  const double r2 = r * r;
  return r2 * r2;
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

// Nearest main-road vehicle strictly ahead of others[index].
std::optional<std::size_t> leader_of(std::size_t index,
                                     std::span<const VehicleState> others) {
  std::optional<std::size_t> best;
  const double x = others[index].x;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (j == index || others[j].x <= x) continue;
    if (!best || others[j].x < others[*best].x) best = j;
  }
  return best;
}

}  // namespace

double idm_desired_gap(double vx, double dvx, const IdmParams& p) {
  return p.d_min + p.t_des * vx + vx * dvx / (2.0 * std::sqrt(p.a_max * p.b_max));
}

double idm_acceleration(double vx, double gap, double dvx, const IdmParams& p,
                        double b_hard_physical) {
  if (!(gap > 0.0)) throw ModelDomainError("idm_acceleration: gap must be positive");
  const double d_des = idm_desired_gap(vx, dvx, p);
  const double ratio = d_des / gap;
  const double acc = p.a_max * (1.0 - pow4(vx / p.v_des) - ratio * ratio);
  return std::clamp(acc, -b_hard_physical, p.a_max);
}

double idm_free_acceleration(double vx, const IdmParams& p, double b_hard_physical,
                             double free_road_gap) {
  return idm_acceleration(vx, free_road_gap, 0.0, p, b_hard_physical);
}

CidmMode cidm_mode(double ttm_agent, double ttm_vehicle, double psi) {
  return ttm_agent < (1.0 - psi) * ttm_vehicle ? CidmMode::Yielding : CidmMode::Passing;
}

IdmParams params_from_aggressiveness(double psi, const DriverModelConfig& cfg) {
  if (!(psi >= 0.0 && psi <= 1.0)) {
    throw ModelDomainError("params_from_aggressiveness: psi outside [0, 1]");
  }
  const IdmParams& lo = cfg.timid;
  const IdmParams& hi = cfg.aggressive;
  IdmParams p;
  p.v_des = std::min(lerp(lo.v_des, hi.v_des, psi), cfg.speed_cap);
  p.d_min = lerp(lo.d_min, hi.d_min, psi);
  p.t_des = lerp(lo.t_des, hi.t_des, psi);
  p.a_max = lerp(lo.a_max, hi.a_max, psi);
  p.b_max = lerp(lo.b_max, hi.b_max, psi);
  return p;
}

InternalState internal_from_aggressiveness(double psi, const DriverModelConfig& cfg) {
  InternalState s;
  s.idm = params_from_aggressiveness(psi, cfg);
  s.w_l = 1.0;
  s.w_m = 1.0;
  s.psi = psi;
  return s;
}

double agent_time_to_merge(const VehicleState& s, const RoadGeometry& road,
                           double speed_floor) {
  const double dist = road.merge_point() - s.x;
  if (dist <= 0.0) return 0.0;
  if (s.vx < speed_floor) return kInf;
  return dist / s.vx;
}

double vehicle_time_to_merge(const VehicleState& s, const RoadGeometry& road,
                             double speed_floor) {
  const double dist = road.merge_point() - s.x;
  if (dist < 0.0) return kInf;
  if (dist == 0.0) return 0.0;
  if (s.vx < speed_floor) return kInf;
  return dist / s.vx;
}

CidmMode driver_mode(std::size_t index, const VehicleState& ego,
                     std::span<const VehicleState> others, double psi,
                     const RoadGeometry& road, const DriverModelConfig& cfg) {
  const VehicleState& me = others[index];
  if (in_main_corridor(ego, road) || ego.x <= me.x) return CidmMode::Passing;
  return cidm_mode(agent_time_to_merge(ego, road, cfg.ttm_speed_floor),
                   vehicle_time_to_merge(me, road, cfg.ttm_speed_floor), psi);
}

VehicleAction driver_action(std::size_t index, const VehicleState& ego,
                            std::span<const VehicleState> others,
                            const InternalState& internal, const RoadGeometry& road,
                            const DriverModelConfig& cfg) {
  const VehicleState& me = others[index];
  const IdmParams& p = internal.idm;
  const bool ego_in_lane = in_main_corridor(ego, road);

  // Front neighbor: another main-road vehicle, or the agent once in the lane.
  double acc_leader = 0.0;
  const auto lead = leader_of(index, others);
  const bool ego_leads =
      ego_in_lane && ego.x > me.x && (!lead || ego.x < others[*lead].x);
  if (ego_leads) {
    const double gap = std::max(ego.x - me.x - cfg.vehicle_length, cfg.min_gap);
    acc_leader = idm_acceleration(me.vx, gap, me.vx - ego.vx, p, cfg.b_hard_physical);
  } else if (lead) {
    const VehicleState& l = others[*lead];
    double gap = l.x - me.x - cfg.vehicle_length;
    if (!cfg.strict_gaps) gap = std::max(gap, cfg.min_gap);
    acc_leader = idm_acceleration(me.vx, gap, me.vx - l.vx, p, cfg.b_hard_physical);
  } else {
    acc_leader = idm_free_acceleration(me.vx, p, cfg.b_hard_physical, cfg.free_road_gap);
  }

  double acc_merge = acc_leader;
  double w_m = 0.0;
  if (driver_mode(index, ego, others, internal.psi, road, cfg) == CidmMode::Yielding) {
    const double gap = std::max(ego.x - me.x - cfg.vehicle_length, cfg.min_gap);
    acc_merge = idm_acceleration(me.vx, gap, me.vx - ego.vx, p, cfg.b_hard_physical);
    w_m = internal.w_m;
  }

  VehicleAction a;
  a.ax = std::clamp(mixed_acceleration(acc_leader, acc_merge, internal.w_l, w_m),
                    -cfg.b_hard_physical, p.a_max);
  a.vy = 0.0;
  return a;
}

}  // namespace lvt
