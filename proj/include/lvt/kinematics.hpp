#pragma once

namespace lvt {

/// Straight two-lane merge geometry. The ramp runs parallel to the main road
/// and shares its longitudinal axis; the merge zone is the last
/// `merge_zone_length` meters of the ramp.
struct RoadGeometry {
  double main_road_length = 500.0;
  double ramp_length = 200.0;
  double merge_zone_length = 100.0;
  double lane_width = 3.7;
  double main_lane_center_y = 3.7;
  double ramp_lane_center_y = 0.0;
  // Longitudinal position of the ramp origin on the main-road axis.
  double ramp_origin_x = 0.0;

  double merge_zone_start() const {
    return ramp_origin_x + ramp_length - merge_zone_length;
  }
  /// End of the merge zone; the point main-road vehicles measure TTM to.
  double merge_point() const { return ramp_origin_x + ramp_length; }
  double main_road_end() const { return main_road_length; }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct VehicleState {
  double x = 0.0;   // longitudinal position [m]
  double y = 0.0;   // lateral position [m]
  double vx = 0.0;  // longitudinal speed [m/s]
};

struct VehicleAction {
  double ax = 0.0;  // longitudinal acceleration [m/s^2]
  double vy = 0.0;  // lateral speed [m/s]
};

inline constexpr double kLateralArrivalTolerance = 0.05;

/// Point-mass update with constant acceleration and lateral speed over dt.
/// Speed is clamped at zero; when the vehicle stops inside the step it holds
/// at its stopping point.
VehicleState step_vehicle(const VehicleState& state, const VehicleAction& action,
                          double dt);

/// Inclusive on both ends.
bool in_merge_zone(const VehicleState& state, const RoadGeometry& road);

bool merge_complete(const VehicleState& state, const RoadGeometry& road,
                    double tolerance = kLateralArrivalTolerance);

/// Fraction of the ramp-to-main lateral offset covered, 0 on the ramp center
/// and 1 on the main-lane center.
double lateral_progress(const VehicleState& state, const RoadGeometry& road);

/// True once the vehicle center has crossed the lane boundary into the main
/// lane, i.e. it physically occupies main-lane space.
bool in_main_corridor(const VehicleState& state, const RoadGeometry& road);

}  // namespace lvt
