#include "lvt/kinematics.hpp"

#include <cmath>
#include <string>

#include "lvt/errors.hpp"

namespace lvt {

void RoadGeometry::validate() const {
  if (!(main_road_length > 0.0 && ramp_length > 0.0 && merge_zone_length > 0.0 &&
        lane_width > 0.0)) {
    throw ConfigError("road lengths must be positive");
  }
  if (merge_zone_length > ramp_length) {
    throw ConfigError("merge zone longer than the ramp");
  }
  if (main_lane_center_y == ramp_lane_center_y) {
    throw ConfigError("ramp and main lane centers coincide");
  }
}

VehicleState step_vehicle(const VehicleState& s, const VehicleAction& a, double dt) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.vx) ||
      !std::isfinite(a.ax) || !std::isfinite(a.vy) || !std::isfinite(dt)) {
    throw InvalidStateError("step_vehicle: non-finite input");
  }
  if (dt <= 0.0) throw InvalidStateError("step_vehicle: dt must be positive");

  VehicleState next;
  next.y = s.y + a.vy * dt;
  const double v_end = s.vx + a.ax * dt;
  if (v_end >= 0.0) {
    next.x = s.x + s.vx * dt + 0.5 * a.ax * dt * dt;
    next.vx = v_end;
  } else {
    // Stops inside the step: travel only the braking distance.
    next.x = s.x + s.vx * s.vx / (2.0 * -a.ax);
    next.vx = 0.0;
  }
  return next;
}

bool in_merge_zone(const VehicleState& s, const RoadGeometry& road) {
  return s.x >= road.merge_zone_start() && s.x <= road.merge_point();
}

bool merge_complete(const VehicleState& s, const RoadGeometry& road, double tolerance) {
  return std::abs(s.y - road.main_lane_center_y) <= tolerance;
}

double lateral_progress(const VehicleState& s, const RoadGeometry& road) {
  return (s.y - road.ramp_lane_center_y) /
         (road.main_lane_center_y - road.ramp_lane_center_y);
}

bool in_main_corridor(const VehicleState& s, const RoadGeometry& road) {
  return lateral_progress(s, road) >= 0.5;
}

}  // namespace lvt
