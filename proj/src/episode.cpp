#include "lvt/episode.hpp"

#include <cmath>

namespace lvt {

std::string_view to_string(EpisodeOutcome outcome) {
  switch (outcome) {
    case EpisodeOutcome::Merged: return "merged";
    case EpisodeOutcome::Timeout: return "timeout";
    case EpisodeOutcome::EndOfRoad: return "end_of_road";
    case EpisodeOutcome::Collision: return "collision";
  }
  return "unknown";
}

std::optional<EpisodeOutcome> outcome_from_string(std::string_view name) {
  for (EpisodeOutcome o : {EpisodeOutcome::Merged, EpisodeOutcome::Timeout,
                           EpisodeOutcome::EndOfRoad, EpisodeOutcome::Collision}) {
    if (to_string(o) == name) return o;
  }
  return std::nullopt;
}

namespace {

EpisodeOutcome outcome_of(TerminalReason r) {
  switch (r) {
    case TerminalReason::Merged: return EpisodeOutcome::Merged;
    case TerminalReason::EndOfRoad: return EpisodeOutcome::EndOfRoad;
    case TerminalReason::Collision: return EpisodeOutcome::Collision;
    case TerminalReason::TimeLimit:
    case TerminalReason::None: break;
  }
  return EpisodeOutcome::Timeout;
}

struct World {
  const ScenarioConfig& scenario;
  const EpisodeOptions& options;
  TrafficState truth;
  Observation obs;
  Rng env_rng;
  std::vector<bool> override_applied;
  EpisodeResult& result;

  double time() const { return truth.step * scenario.sim.dt(); }

  void apply_overrides() {
    for (std::size_t i = 0; i < scenario.overrides.size(); ++i) {
      const PsiOverride& o = scenario.overrides[i];
      if (override_applied[i] || time() < o.time - 1e-9) continue;
      truth.internals.at(o.vehicle) = internal_from_aggressiveness(o.psi, scenario.sim.drivers);
      override_applied[i] = true;
    }
  }

  // Advances the world one step under `action` and logs it.
  StepFlags advance(const VehicleAction& action, const EgoControllerState& ctrl) {
    const SimConfig& sim = scenario.sim;
    StepResult step = generative_step(truth, action, sim, env_rng);
    if (options.record_trace) {
      TraceRow row;
      row.step = truth.step;
      row.time = time();
      row.ego = truth.ego;
      row.ego_action = action;
      row.policy = ctrl.active_policy;
      row.psi_setpoint = ctrl.psi_setpoint;
      row.others = truth.others;
      row.other_accelerations = step.other_accelerations;
      for (const InternalState& in : truth.internals) row.other_psi.push_back(in.psi);
      row.flags = step.flags;
      result.trace.push_back(std::move(row));
    }
    if (!result.merge_event && in_main_corridor(step.next.ego, sim.road) &&
        !in_main_corridor(truth.ego, sim.road)) {
      const SafetyReading r = safety_reading(step.next.ego, step.next.others);
      result.merge_event = MergeEvent{step.next.step * sim.dt(), r.ttc, r.tiv};
    }
    truth = std::move(step.next);
    obs = std::move(step.observation);
    result.safety_violated = result.safety_violated || step.flags.safety_violated;
    result.hard_brake = result.hard_brake || step.flags.hard_brake;
    return step.flags;
  }
};

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& scenario, const AgentSettings& agent_settings,
                          std::uint64_t seed, const EpisodeOptions& options) {
  scenario.validate();
  const SimConfig& sim = scenario.sim;

  EpisodeResult result;
  result.scenario = scenario.name;
  result.agent = agent_settings.kind;
  result.iterations = agent_settings.planner.iterations;
  result.seed = seed;

  Rng init_rng(derive_seed(seed, 0));
  Rng agent_rng(derive_seed(seed, 2));
  World world{scenario, options, initial_traffic(scenario, init_rng), {},
              Rng(derive_seed(seed, 1)), std::vector<bool>(scenario.overrides.size(), false),
              result};
  world.obs = observe(world.truth, sim.noise, world.env_rng);

  auto agent = make_agent(agent_settings, sim);
  agent->reset(world.obs, world.truth);

  EgoControllerState ctrl;
  bool need_decision = true;
  StepFlags decision_flags;
  const int cap = static_cast<int>(std::lround(sim.policy_cap / sim.dt()));

  auto start = [&](PolicyId policy, DecisionRecord rec) {
    ctrl = start_policy(policy, ctrl, world.obs, sim.ego);
    rec.policy = policy;
    if (policy == PolicyId::GiveWay) result.gave_way = true;
    result.decisions.push_back(std::move(rec));
    decision_flags = {};
  };

  TerminalReason reason = TerminalReason::None;
  while (true) {
    world.apply_overrides();
    reason = terminal_reason(world.truth, sim);
    if (reason != TerminalReason::None) break;

    if (need_decision) {
      DecisionRecord rec = agent->decide(world.obs, world.truth, ctrl, agent_rng);
      start(rec.policy, std::move(rec));
      need_decision = false;
    } else if (auto forced = agent->monitor(world.obs, ctrl)) {
      // Close the interrupted policy's reward before switching.
      result.total_reward += decision_reward(decision_flags, sim.weights);
      DecisionRecord rec;
      rec.step = world.obs.step;
      rec.psi_setpoint = ctrl.psi_setpoint;
      start(*forced, std::move(rec));
    }

    const VehicleAction action =
        policy_action(ctrl.active_policy, world.obs, ctrl, sim.road, sim.ego, sim.drivers);
    decision_flags |= world.advance(action, ctrl);
    agent->observe(world.obs);
    ++ctrl.policy_steps;

    const bool done = policy_terminated(ctrl.active_policy, world.obs, ctrl, sim.road, sim.ego) ||
                      ctrl.policy_steps >= cap || is_terminal(world.truth, sim);
    if (done) {
      result.total_reward += decision_reward(decision_flags, sim.weights);
      decision_flags = {};
      need_decision = true;
    }
  }

  result.outcome = outcome_of(reason);
  if (reason == TerminalReason::Merged) {
    result.merge_time = world.time();
    // Let the traffic react to the completed merge.
    const int settle = static_cast<int>(std::lround(options.post_merge_time / sim.dt()));
    EgoControllerState keep = ctrl;
    keep = start_policy(PolicyId::Maintain, keep, world.obs, sim.ego);
    for (int i = 0; i < settle; ++i) {
      world.apply_overrides();
      const VehicleAction action =
          policy_action(PolicyId::Maintain, world.obs, keep, sim.road, sim.ego, sim.drivers);
      world.advance(action, keep);
      if (ego_collision(world.truth.ego, world.truth.others, sim.road,
                        sim.drivers.vehicle_length)) {
        break;
      }
    }
  }
  return result;
}

}  // namespace lvt
