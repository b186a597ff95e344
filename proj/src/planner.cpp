#include "lvt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lvt/errors.hpp"
#include "lvt/objective.hpp"

namespace lvt {

void PlannerConfig::validate() const {
  if (iterations < 1) throw ConfigError("planner: iterations must be >= 1");
  if (!(exploration > 0.0)) throw ConfigError("planner: exploration must be > 0");
  if (!(widening_k > 0.0)) throw ConfigError("planner: widening k must be > 0");
  if (!(widening_alpha > 0.0 && widening_alpha < 1.0)) {
    throw ConfigError("planner: widening alpha must be in (0, 1)");
  }
  if (max_depth < 1) throw ConfigError("planner: max depth must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("planner: gamma must be in (0, 1)");
  if (!(noise_scale >= 0.0)) throw ConfigError("planner: noise scale must be >= 0");
}

double ucb1(double value, int child_visits, int parent_visits, double exploration) {
  if (child_visits == 0) return std::numeric_limits<double>::infinity();
  return value + exploration * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                         static_cast<double>(child_visits));
}

bool widening_admits(std::size_t children, int visits, double k, double alpha) {
  return static_cast<double>(children) <= k * std::pow(static_cast<double>(visits), alpha);
}

TrafficState state_from_observation(const Observation& obs, const DriverModelConfig& drivers) {
  TrafficState s;
  s.step = obs.step;
  s.ego = obs.ego;
  s.others = obs.others;
  s.internals.assign(obs.others.size(), InternalState{});

  std::vector<std::size_t> order(s.others.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.others[a].x > s.others[b].x; });
  const double spacing = drivers.vehicle_length + drivers.min_gap;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double limit = s.others[order[i - 1]].x - spacing;
    auto& v = s.others[order[i]];
    v.x = std::min(v.x, limit);
  }
  return s;
}

Planner::Planner(PlannerConfig cfg, SimConfig sim, const BeliefModel& model)
    : cfg_(cfg), sim_(std::move(sim)), model_(&model) {
  cfg_.validate();
  sim_.validate();
}

std::vector<InternalState> Planner::draw_internals(const Belief& b, Rng& rng) {
  return model_->sample(b, rng);
}

PlanResult Planner::plan(const PlanRequest& request, Rng& rng) {
  tree_ = SearchTree{};
  belief_updates_ = 0;
  truncated_ = 0;

  ObservationNode root;
  root.belief = request.belief;
  root.state = request.state;
  root.observation = request.observation;
  root.ctrl = request.ctrl;
  root.terminal = is_terminal(request.state, sim_);
  tree_.observation_nodes.push_back(std::move(root));

  for (int i = 0; i < cfg_.iterations; ++i) {
    TrafficState s = tree_.observation_nodes[0].state;
    s.internals = draw_internals(*tree_.observation_nodes[0].belief, rng);
    if (cfg_.sampling == StateSampling::PerIteration) iteration_internals_ = s.internals;
    simulate(0, s, cfg_.max_depth, rng);
  }

  PlanResult result;
  const ObservationNode& r = tree_.observation_nodes[0];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t id : r.children) {
    const PolicyNode& p = tree_.policy_nodes[id];
    result.root_children.push_back({p.policy, p.visits, p.value});
    // Children are stored in enumeration order, so strict > keeps the lowest ordinal on ties.
    if (p.value > best) {
      best = p.value;
      result.policy = p.policy;
    }
  }
  result.observation_nodes = tree_.observation_nodes.size();
  result.belief_updates = belief_updates_;
  result.truncated_policies = truncated_;
  return result;
}

std::size_t Planner::action_prog_widen(std::size_t node) {
  ObservationNode& n = tree_.observation_nodes[node];
  if (widening_admits(n.children.size(), n.visits, cfg_.widening_k, cfg_.widening_alpha)) {
    const PolicySet available = available_policies(n.observation.ego, n.ctrl, sim_.road);
    for (PolicyId id : kAllPolicies) {
      if (!available.contains(id)) continue;
      const bool expanded = std::any_of(n.children.begin(), n.children.end(), [&](std::size_t c) {
        return tree_.policy_nodes[c].policy == id;
      });
      if (expanded) continue;
      PolicyNode child;
      child.policy = id;
      tree_.policy_nodes.push_back(child);
      tree_.observation_nodes[node].children.push_back(tree_.policy_nodes.size() - 1);
      break;
    }
  }

  const ObservationNode& m = tree_.observation_nodes[node];
  std::size_t best = m.children.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c : m.children) {
    const PolicyNode& p = tree_.policy_nodes[c];
    const double score = ucb1(p.value, p.visits, m.visits, cfg_.exploration);
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

double Planner::simulate(std::size_t node, const TrafficState& state, int depth, Rng& rng) {
  if (depth == 0) return 0.0;
  if (tree_.observation_nodes[node].terminal) return 0.0;

  const std::size_t pnode = action_prog_widen(node);
  const PolicyId policy = tree_.policy_nodes[pnode].policy;
  double total = 0.0;

  if (widening_admits(tree_.policy_nodes[pnode].children.size(), tree_.policy_nodes[pnode].visits,
                      cfg_.widening_k, cfg_.widening_alpha)) {
    const ObservationNode& parent = tree_.observation_nodes[node];
    PolicyRun run = execute_policy(policy, state, parent.observation, parent.ctrl, sim_, rng,
                                   cfg_.noise_scale);
    if (run.truncated) ++truncated_;

    BeliefPtr belief = parent.belief;
    if (cfg_.in_tree_updates && model_->learns()) {
      belief = model_->update(belief, run.history);
      ++belief_updates_;
    }

    ObservationNode child;
    child.belief = std::move(belief);
    child.state = run.final_state;
    child.observation = run.final_observation;
    child.ctrl = run.ctrl;
    child.reward = decision_reward(run.flags, sim_.weights);
    child.terminal = run.truncated || is_terminal(run.final_state, sim_);
    const double reward = child.reward;
    const bool terminal = child.terminal;
    tree_.observation_nodes.push_back(std::move(child));
    tree_.policy_nodes[pnode].children.push_back(tree_.observation_nodes.size() - 1);

    const double future =
        terminal ? 0.0
                 : rollout(run.final_state, run.final_observation, run.ctrl, depth - 1, rng);
    total = reward + cfg_.gamma * future;
  } else {
    const auto& kids = tree_.policy_nodes[pnode].children;
    const std::size_t next = kids[uniform_index(rng, kids.size())];
    const ObservationNode& child = tree_.observation_nodes[next];
    TrafficState s = child.state;
    s.internals = cfg_.sampling == StateSampling::PerIteration
                      ? iteration_internals_
                      : draw_internals(*child.belief, rng);
    const double reward = child.reward;
    total = reward + cfg_.gamma * simulate(next, s, depth - 1, rng);
  }

  ObservationNode& n = tree_.observation_nodes[node];
  PolicyNode& p = tree_.policy_nodes[pnode];
  ++n.visits;
  ++p.visits;
  p.value += (total - p.value) / p.visits;
  return total;
}

double Planner::rollout(const TrafficState& state, const Observation& obs,
                        const EgoControllerState& ctrl, int depth, Rng& rng) {
  TrafficState s = state;
  Observation o = obs;
  EgoControllerState c = ctrl;
  double total = 0.0;
  double discount = 1.0;
  for (int d = 0; d < depth; ++d) {
    if (is_terminal(s, sim_)) break;
    const PolicySet available = available_policies(o.ego, c, sim_.road);
    const PolicyId policy = available.nth(uniform_index(rng, available.size()));
    PolicyRun run = execute_policy(policy, s, o, c, sim_, rng, cfg_.noise_scale);
    total += discount * decision_reward(run.flags, sim_.weights);
    discount *= cfg_.gamma;
    if (run.truncated) {
      ++truncated_;
      break;
    }
    s = std::move(run.final_state);
    o = std::move(run.final_observation);
    c = run.ctrl;
  }
  return total;
}

}  // namespace lvt
