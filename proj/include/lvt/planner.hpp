#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lvt/belief.hpp"
#include "lvt/ego_control.hpp"
#include "lvt/rng.hpp"
#include "lvt/simulator.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

/// How hidden states are drawn during search.
enum class StateSampling {
  PerVisit,      // from the belief stored at each visited observation node
  PerIteration,  // once per iteration from the root belief, kept for the whole descent
};

struct PlannerConfig {
  int iterations = 150;
  double exploration = 5.0;  // UCB1 constant c
  double widening_k = 2.0;
  double widening_alpha = 0.1;
  int max_depth = 15;        // decision steps
  double gamma = 0.9;
  StateSampling sampling = StateSampling::PerVisit;
  bool in_tree_updates = true;  // update beliefs at new observation nodes
  double noise_scale = 1.0;     // observation noise inside the search

  void validate() const;
};

struct PolicyNode {
  PolicyId policy = PolicyId::Maintain;
  int visits = 0;
  double value = 0.0;
  std::vector<std::size_t> children;  // observation node ids
};

struct ObservationNode {
  BeliefPtr belief;
  TrafficState state;  // physical state reached; internals are resampled on revisits
  Observation observation;
  EgoControllerState ctrl;
  double reward = 0.0;  // decision reward of the transition into this node
  bool terminal = false;
  int visits = 0;
  std::vector<std::size_t> children;  // policy node ids
};

struct SearchTree {
  std::vector<ObservationNode> observation_nodes;  // [0] is the root
  std::vector<PolicyNode> policy_nodes;
};

struct RootChildStat {
  PolicyId policy;
  int visits;
  double value;
};

struct PlanResult {
  PolicyId policy = PolicyId::Maintain;
  std::vector<RootChildStat> root_children;
  std::size_t observation_nodes = 0;
  std::size_t belief_updates = 0;
  std::size_t truncated_policies = 0;
};

struct PlanRequest {
  BeliefPtr belief;
  TrafficState state;  // root physical state; internals are replaced by samples
  Observation observation;
  EgoControllerState ctrl;
};

/// UCB1 score; +inf for an unvisited child.
double ucb1(double value, int child_visits, int parent_visits, double exploration);

/// Widening test |C| <= k * N^alpha.
bool widening_admits(std::size_t children, int visits, double k, double alpha);

class Planner {
 public:
  Planner(PlannerConfig cfg, SimConfig sim, const BeliefModel& model);

  PlanResult plan(const PlanRequest& request, Rng& rng);

  /// Tree of the most recent plan() call.
  const SearchTree& tree() const { return tree_; }
  const PlannerConfig& config() const { return cfg_; }

  /// Random-policy rollout value from `state` over `depth` decisions.
  double rollout(const TrafficState& state, const Observation& obs, const EgoControllerState& ctrl,
                 int depth, Rng& rng);

 private:
  double simulate(std::size_t node, const TrafficState& state, int depth, Rng& rng);
  std::size_t action_prog_widen(std::size_t node);
  std::vector<InternalState> draw_internals(const Belief& b, Rng& rng);

  PlannerConfig cfg_;
  SimConfig sim_;
  const BeliefModel* model_;
  SearchTree tree_;
  std::vector<InternalState> iteration_internals_;
  std::size_t belief_updates_ = 0;
  std::size_t truncated_ = 0;
};

/// Planning state built from a noisy observation: main-road vehicles are
/// pushed back where measured positions overlap so that the simulated
/// traffic starts physically valid.
TrafficState state_from_observation(const Observation& obs, const DriverModelConfig& drivers);

}  // namespace lvt
