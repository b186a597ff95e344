#pragma once

#include <cstddef>
#include <span>

#include "lvt/kinematics.hpp"

namespace lvt {

/// Intelligent Driver Model parameter set.
struct IdmParams {
  double v_des = 0.0;  // desired speed [m/s]
  double d_min = 0.0;  // minimum bumper-to-bumper gap [m]
  double t_des = 0.0;  // desired time gap [s]
  double a_max = 0.0;  // maximum acceleration [m/s^2]
  double b_max = 0.0;  // comfortable deceleration, positive magnitude [m/s^2]

  bool valid() const {
    return v_des > 0.0 && d_min > 0.0 && t_des > 0.0 && a_max > 0.0 && b_max > 0.0;
  }
};

/// Hidden driver parameters: IDM set, attentiveness weights and the
/// aggressiveness level the IDM set was derived from.
struct InternalState {
  IdmParams idm;
  double w_l = 1.0;  // attention to the front neighbor
  double w_m = 1.0;  // attention to the merging agent
  double psi = 0.5;  // aggressiveness in [0, 1]
};

struct DriverModelConfig {
  IdmParams timid{19.4, 4.0, 2.0, 0.8, 1.0};
  IdmParams aggressive{30.0, 1.0, 0.5, 2.0, 3.0};
  double b_hard_physical = 9.0;   // absolute deceleration limit [m/s^2]
  double free_road_gap = 1e9;     // substitute gap when nobody is ahead [m]
  double ttm_speed_floor = 0.1;   // below this speed TTM is infinite [m/s]
  double vehicle_length = 5.0;    // used to turn center distances into gaps [m]
  double min_gap = 0.1;           // floor for gaps to the merging agent [m]
  double speed_cap = 30.0;        // upper bound on any v_des [m/s]
  // When false, gaps between main-road vehicles are floored at min_gap
  // instead of raising ModelDomainError. Used when predicting from noisy
  // observations, where measured vehicles can appear to overlap.
  bool strict_gaps = true;
};

enum class CidmMode { Yielding, Passing };

double idm_desired_gap(double vx, double dvx, const IdmParams& p);

/// IDM acceleration (exponent 4), clamped to [-b_hard_physical, a_max].
/// Throws ModelDomainError for gap <= 0.
double idm_acceleration(double vx, double gap, double dvx, const IdmParams& p,
                        double b_hard_physical = 9.0);

/// Free-road IDM acceleration.
double idm_free_acceleration(double vx, const IdmParams& p, double b_hard_physical,
                             double free_road_gap = 1e9);

CidmMode cidm_mode(double ttm_agent, double ttm_vehicle, double psi);

inline double mixed_acceleration(double acc_leader, double acc_merge, double w_l,
                                 double w_m) {
  return w_l * acc_leader + w_m * acc_merge;
}

/// Componentwise linear interpolation between the timid (psi = 0) and
/// aggressive (psi = 1) anchors. Throws ModelDomainError outside [0, 1].
IdmParams params_from_aggressiveness(double psi, const DriverModelConfig& cfg = {});

/// Builds the ground-truth internal state for a C-IDM driver.
InternalState internal_from_aggressiveness(double psi, const DriverModelConfig& cfg = {});

/// Time for the merging agent to reach the end of the merge zone. Zero once
/// it is at or beyond that point; infinite when (nearly) stopped short of it.
double agent_time_to_merge(const VehicleState& s, const RoadGeometry& road,
                           double speed_floor = 0.1);

/// Time for a main-road vehicle to reach the merge point; infinite once it
/// has passed it or when (nearly) stopped.
double vehicle_time_to_merge(const VehicleState& s, const RoadGeometry& road,
                             double speed_floor = 0.1);

/// Longitudinal command of main-road vehicle `index` (an index into
/// `others`). The driver follows its front neighbor with IDM; while the agent
/// is still on the ramp and C-IDM selects yielding, a second IDM term against
/// the agent's projection onto the main lane is mixed in with weight w_m.
/// Once the agent occupies the main lane it is an ordinary front neighbor.
VehicleAction driver_action(std::size_t index, const VehicleState& ego,
                            std::span<const VehicleState> others,
                            const InternalState& internal, const RoadGeometry& road,
                            const DriverModelConfig& cfg = {});

/// C-IDM mode that `driver_action` would use for this driver right now.
CidmMode driver_mode(std::size_t index, const VehicleState& ego,
                     std::span<const VehicleState> others, double psi,
                     const RoadGeometry& road, const DriverModelConfig& cfg = {});

}  // namespace lvt
