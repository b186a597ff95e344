#include "lvt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvt/errors.hpp"

namespace lvt {

void SimConfig::validate() const {
  road.validate();
  if (!weights.valid()) throw ConfigError("reward weights invalid");
  if (!(ego.dt > 0.0) || !(ego.decision_period >= ego.dt)) throw ConfigError("bad time step");
  if (!(noise.sigma_x >= 0.0) || !(noise.sigma_y >= 0.0)) throw ConfigError("negative noise");
  if (!(policy_cap > 0.0) || !(time_limit > 0.0)) throw ConfigError("bad time limits");
}

Observation observe(const TrafficState& state, const NoiseConfig& noise, Rng& rng,
                    double noise_scale) {
  Observation o = observe_exact(state);
  if (noise_scale == 0.0) return o;
  for (VehicleState& v : o.others) {
    v.x += noise.sigma_x * noise_scale * standard_normal(rng);
    v.y += noise.sigma_y * noise_scale * standard_normal(rng);
  }
  return o;
}

namespace {

void check_main_road_order(const std::vector<VehicleState>& others, double length) {
  for (std::size_t i = 0; i < others.size(); ++i) {
    for (std::size_t j = i + 1; j < others.size(); ++j) {
      if (std::abs(others[i].x - others[j].x) < length) {
        throw SimulationIntegrityError("main-road vehicles " + std::to_string(i) + " and " +
                                       std::to_string(j) + " overlap");
      }
    }
  }
}

}  // namespace

StepResult generative_step(const TrafficState& state, const VehicleAction& ego_action,
                           const SimConfig& cfg, Rng& rng, double noise_scale) {
  const double dt = cfg.dt();
  StepResult r;
  r.other_accelerations.reserve(state.others.size());
  for (std::size_t i = 0; i < state.others.size(); ++i) {
    r.other_accelerations.push_back(driver_action(i, state, cfg.road, cfg.drivers).ax);
  }

  r.next.step = state.step + 1;
  r.next.internals = state.internals;
  r.next.ego = step_vehicle(state.ego, ego_action, dt);
  r.next.others.reserve(state.others.size());
  for (std::size_t i = 0; i < state.others.size(); ++i) {
    r.next.others.push_back(step_vehicle(state.others[i], {r.other_accelerations[i], 0.0}, dt));
  }
  check_main_road_order(r.next.others, cfg.drivers.vehicle_length);

  r.flags = transition_flags(state, r.next, r.other_accelerations, cfg.road, cfg.weights,
                             cfg.drivers.vehicle_length);
  r.observation = observe(r.next, cfg.noise, rng, noise_scale);
  return r;
}

TerminalReason terminal_reason(const TrafficState& state, const SimConfig& cfg) {
  if (ego_collision(state.ego, state.others, cfg.road, cfg.drivers.vehicle_length)) {
    return TerminalReason::Collision;
  }
  if (merge_complete(state.ego, cfg.road)) return TerminalReason::Merged;
  if (state.ego.x >= cfg.road.main_road_end()) return TerminalReason::EndOfRoad;
  if (state.step * cfg.dt() >= cfg.time_limit - 1e-9) return TerminalReason::TimeLimit;
  return TerminalReason::None;
}

PolicyRun execute_policy(PolicyId policy, const TrafficState& start, const Observation& obs,
                         const EgoControllerState& ctrl, const SimConfig& cfg, Rng& rng,
                         double noise_scale) {
  PolicyRun run;
  run.final_state = start;
  run.final_observation = obs;
  run.ctrl = start_policy(policy, ctrl, obs, cfg.ego);
  const int cap = static_cast<int>(std::lround(cfg.policy_cap / cfg.dt()));

  while (true) {
    const VehicleAction a = policy_action(policy, run.final_observation, run.ctrl, cfg.road,
                                          cfg.ego, cfg.drivers);
    StepResult step = generative_step(run.final_state, a, cfg, rng, noise_scale);
    run.flags |= step.flags;
    run.final_state = std::move(step.next);
    run.final_observation = step.observation;
    run.history.push_back(std::move(step.observation));
    ++run.ctrl.policy_steps;
    ++run.steps;

    if (policy_terminated(policy, run.final_observation, run.ctrl, cfg.road, cfg.ego)) break;
    if (is_terminal(run.final_state, cfg)) break;
    if (run.steps >= cap) {
      run.truncated = true;
      break;
    }
  }
  return run;
}

}  // namespace lvt
