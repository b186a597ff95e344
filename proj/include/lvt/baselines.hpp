#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "lvt/belief.hpp"
#include "lvt/ego_control.hpp"
#include "lvt/planner.hpp"
#include "lvt/simulator.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

enum class AgentKind { Lvt, Omniscient, MctsPrior, MctsNormal, Qmdp, RuleBased };

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> agent_from_string(std::string_view name);
bool is_planning_agent(AgentKind kind);

struct RuleThresholds {
  double ttc_safe = 5.6;
  double tiv_safe = 2.5;
};

/// In the merge zone: MergeIn when the rear gap is safe by both measures,
/// GiveWay otherwise. Maintain outside the zone.
PolicyId rule_based_decide(const Observation& obs, const RuleThresholds& th,
                           const RoadGeometry& road);

/// Per-step check while merging: abandons MergeIn for GiveWay once the rear
/// gap turns unsafe, as long as the agent has not yet crossed into the lane.
std::optional<PolicyId> rule_based_monitor(const Observation& obs, const EgoControllerState& ctrl,
                                           const RuleThresholds& th, const RoadGeometry& road,
                                           const EgoConfig& ego);

struct AgentSettings {
  AgentKind kind = AgentKind::Lvt;
  PlannerConfig planner;
  BeliefConfig belief;
  RuleThresholds thresholds;
  double normal_psi = 0.5;  // what MCTS-normal assumes for every driver
};

/// Planner configuration the given agent searches with.
PlannerConfig planner_config_for(const AgentSettings& settings);

struct DecisionRecord {
  int step = 0;
  PolicyId policy = PolicyId::Maintain;
  double psi_setpoint = 0.5;
  std::vector<RootChildStat> root_children;
  std::size_t tree_nodes = 0;
  std::size_t belief_updates = 0;
  std::vector<std::vector<double>> psi_posterior;  // per vehicle, empty if not a grid belief
};

/// Decision maker run in closed loop by the episode runner.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual void reset(const Observation& first, const TrafficState& truth) = 0;
  /// Called with every observation received while a policy executes.
  virtual void observe(const Observation& obs) = 0;
  virtual DecisionRecord decide(const Observation& obs, const TrafficState& truth,
                                const EgoControllerState& ctrl, Rng& rng) = 0;
  /// Optional per-step override of the running policy.
  virtual std::optional<PolicyId> monitor(const Observation& obs, const EgoControllerState& ctrl) {
    (void)obs;
    (void)ctrl;
    return std::nullopt;
  }
  virtual AgentKind kind() const = 0;
};

std::unique_ptr<Agent> make_agent(const AgentSettings& settings, const SimConfig& sim);

}  // namespace lvt
