#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lvt/baselines.hpp"
#include "lvt/objective.hpp"
#include "lvt/scenario.hpp"
#include "lvt/simulator.hpp"

namespace lvt {

struct TraceRow {
  int step = 0;
  double time = 0.0;
  VehicleState ego;
  VehicleAction ego_action;
  PolicyId policy = PolicyId::Maintain;
  double psi_setpoint = 0.5;
  std::vector<VehicleState> others;
  std::vector<double> other_accelerations;
  std::vector<double> other_psi;  // ground truth during the step
  StepFlags flags;
};

enum class EpisodeOutcome { Merged, Timeout, EndOfRoad, Collision };

std::string_view to_string(EpisodeOutcome outcome);
std::optional<EpisodeOutcome> outcome_from_string(std::string_view name);

/// TTC/TIV to the rear vehicle when the agent first crosses into the lane.
struct MergeEvent {
  double time = 0.0;
  double ttc = 0.0;
  double tiv = 0.0;
};

struct EpisodeResult {
  std::string scenario;
  AgentKind agent = AgentKind::Lvt;
  int iterations = 0;
  std::uint64_t seed = 0;

  std::vector<TraceRow> trace;
  std::vector<DecisionRecord> decisions;

  EpisodeOutcome outcome = EpisodeOutcome::Timeout;
  std::optional<double> merge_time;
  std::optional<MergeEvent> merge_event;
  bool safety_violated = false;
  bool hard_brake = false;
  bool gave_way = false;
  double total_reward = 0.0;
};

struct EpisodeOptions {
  double post_merge_time = 2.0;  // traffic keeps running this long after the merge [s]
  bool record_trace = true;
};

/// Closed-loop episode: the agent decides whenever its policy terminates and
/// the world advances at the simulation rate. Deterministic given `seed`.
EpisodeResult run_episode(const ScenarioConfig& scenario, const AgentSettings& agent,
                          std::uint64_t seed, const EpisodeOptions& options = {});

}  // namespace lvt
