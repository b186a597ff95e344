#pragma once

#include <vector>

#include "lvt/driver_model.hpp"
#include "lvt/ego_control.hpp"
#include "lvt/kinematics.hpp"
#include "lvt/objective.hpp"
#include "lvt/rng.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

struct NoiseConfig {
  double sigma_x = 1.0;  // longitudinal position noise on main-road vehicles [m]
  double sigma_y = 0.2;  // lateral position noise [m]
};

struct SimConfig {
  RoadGeometry road;
  DriverModelConfig drivers;
  EgoConfig ego;
  RewardWeights weights;
  NoiseConfig noise;
  double policy_cap = 60.0;  // hard cap on one policy execution [s]
  double time_limit = 40.0;  // episode length [s]

  double dt() const { return ego.dt; }
  void validate() const;
};

struct StepResult {
  TrafficState next;
  Observation observation;
  std::vector<double> other_accelerations;
  StepFlags flags;
};

/// Generative model: all main-road drivers act on the current state, every
/// vehicle advances one step and the agent receives a noisy observation.
/// `noise_scale` multiplies both sigmas (0 gives exact observations).
StepResult generative_step(const TrafficState& state, const VehicleAction& ego_action,
                           const SimConfig& cfg, Rng& rng, double noise_scale = 1.0);

/// Observation of `state` with sensor noise on main-road positions.
Observation observe(const TrafficState& state, const NoiseConfig& noise, Rng& rng,
                    double noise_scale = 1.0);

enum class TerminalReason { None, Merged, EndOfRoad, TimeLimit, Collision };

TerminalReason terminal_reason(const TrafficState& state, const SimConfig& cfg);
inline bool is_terminal(const TrafficState& state, const SimConfig& cfg) {
  return terminal_reason(state, cfg) != TerminalReason::None;
}

struct PolicyRun {
  TrafficState final_state;
  Observation final_observation;
  EgoControllerState ctrl;
  std::vector<Observation> history;  // one observation per executed step
  StepFlags flags;
  int steps = 0;
  bool truncated = false;  // stopped by the policy cap
};

/// Runs `policy` from activation to termination, an episode-terminal state
/// or the policy cap, whichever comes first. At least one step is executed.
PolicyRun execute_policy(PolicyId policy, const TrafficState& start, const Observation& obs,
                         const EgoControllerState& ctrl, const SimConfig& cfg, Rng& rng,
                         double noise_scale = 1.0);

}  // namespace lvt
