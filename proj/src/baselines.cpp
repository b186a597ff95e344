#include "lvt/baselines.hpp"

#include <stdexcept>

#include "lvt/objective.hpp"

namespace lvt {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Lvt: return "lvt";
    case AgentKind::Omniscient: return "omniscient";
    case AgentKind::MctsPrior: return "mcts_prior";
    case AgentKind::MctsNormal: return "mcts_normal";
    case AgentKind::Qmdp: return "qmdp";
    case AgentKind::RuleBased: return "rule_based";
  }
  return "unknown";
}

std::optional<AgentKind> agent_from_string(std::string_view name) {
  for (AgentKind k : {AgentKind::Lvt, AgentKind::Omniscient, AgentKind::MctsPrior,
                      AgentKind::MctsNormal, AgentKind::Qmdp, AgentKind::RuleBased}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool is_planning_agent(AgentKind kind) { return kind != AgentKind::RuleBased; }

namespace {

bool rear_gap_safe(const Observation& obs, const RuleThresholds& th) {
  const SafetyReading r = safety_reading(obs.ego, obs.others);
  return r.ttc > th.ttc_safe && r.tiv > th.tiv_safe;
}

}  // namespace

PolicyId rule_based_decide(const Observation& obs, const RuleThresholds& th,
                           const RoadGeometry& road) {
  if (!in_merge_zone(obs.ego, road)) return PolicyId::Maintain;
  return rear_gap_safe(obs, th) ? PolicyId::MergeIn : PolicyId::GiveWay;
}

std::optional<PolicyId> rule_based_monitor(const Observation& obs, const EgoControllerState& ctrl,
                                           const RuleThresholds& th, const RoadGeometry& road,
                                           const EgoConfig& ego) {
  if (ctrl.active_policy != PolicyId::MergeIn) return std::nullopt;
  if (lateral_progress(obs.ego, road) >= ego.abort_progress) return std::nullopt;
  if (rear_gap_safe(obs, th)) return std::nullopt;
  return PolicyId::GiveWay;
}

PlannerConfig planner_config_for(const AgentSettings& settings) {
  PlannerConfig p = settings.planner;
  switch (settings.kind) {
    case AgentKind::Omniscient:
      p.noise_scale = 0.0;
      break;
    case AgentKind::Qmdp:
      p.sampling = StateSampling::PerIteration;
      p.in_tree_updates = false;
      break;
    default:
      break;
  }
  return p;
}

namespace {

std::vector<std::vector<double>> psi_posterior(const Belief& b, std::size_t grid_cells) {
  std::vector<std::vector<double>> out;
  for (std::size_t v = 0; v < b.vehicle_count(); ++v) {
    if (b.posterior[v].size() != grid_cells) return {};
    out.push_back(b.psi_marginal(v));
  }
  return out;
}

class PlanningAgent final : public Agent {
 public:
  PlanningAgent(AgentSettings settings, SimConfig sim)
      : settings_(std::move(settings)), sim_(std::move(sim)),
        planner_cfg_(planner_config_for(settings_)) {
    settings_.belief.road = sim_.road;
    settings_.belief.drivers = sim_.drivers;
    settings_.belief.dt = sim_.dt();
  }

  void reset(const Observation& first, const TrafficState&) override {
    pending_.clear();
    switch (settings_.kind) {
      case AgentKind::Lvt:
      case AgentKind::Qmdp:
        model_ = std::make_unique<GridBeliefModel>(settings_.belief);
        break;
      case AgentKind::MctsPrior:
        model_ = std::make_unique<PriorBeliefModel>(settings_.belief);
        break;
      case AgentKind::MctsNormal:
        model_ = std::make_unique<FixedBeliefModel>(
            internal_from_hypothesis({settings_.normal_psi, true}, settings_.belief.drivers),
            first.others.size());
        break;
      case AgentKind::Omniscient:
        model_.reset();
        break;
      case AgentKind::RuleBased:
        throw std::logic_error("PlanningAgent: rule-based agent does not plan");
    }
    if (model_) belief_ = model_->initial(first);
  }

  void observe(const Observation& obs) override { pending_.push_back(obs); }

  DecisionRecord decide(const Observation& obs, const TrafficState& truth,
                        const EgoControllerState& ctrl, Rng& rng) override {
    DecisionRecord rec;
    rec.step = obs.step;
    rec.psi_setpoint = ctrl.psi_setpoint;

    PlanRequest request;
    request.observation = obs;
    request.ctrl = ctrl;
    std::unique_ptr<BeliefModel> truth_model;
    const BeliefModel* model = model_.get();
    if (settings_.kind == AgentKind::Omniscient) {
      truth_model = std::make_unique<FixedBeliefModel>(truth.internals);
      model = truth_model.get();
      request.observation = observe_exact(truth);
      request.belief = model->initial(request.observation);
      request.state = truth;
    } else {
      belief_ = model_->update(belief_, pending_);
      if (model_->learns()) ++rec.belief_updates;
      request.belief = belief_;
      request.state = state_from_observation(obs, sim_.drivers);
    }
    pending_.clear();

    Planner planner(planner_cfg_, sim_, *model);
    const PlanResult result = planner.plan(request, rng);
    rec.policy = result.policy;
    rec.root_children = result.root_children;
    rec.tree_nodes = result.observation_nodes;
    rec.belief_updates += result.belief_updates;
    rec.psi_posterior =
        psi_posterior(*request.belief, 2 * static_cast<std::size_t>(settings_.belief.psi_points));
    return rec;
  }

  AgentKind kind() const override { return settings_.kind; }

 private:
  AgentSettings settings_;
  SimConfig sim_;
  PlannerConfig planner_cfg_;
  std::unique_ptr<BeliefModel> model_;
  BeliefPtr belief_;
  std::vector<Observation> pending_;
};

class RuleBasedAgent final : public Agent {
 public:
  RuleBasedAgent(RuleThresholds th, SimConfig sim) : th_(th), sim_(std::move(sim)) {}

  void reset(const Observation&, const TrafficState&) override {}
  void observe(const Observation&) override {}

  DecisionRecord decide(const Observation& obs, const TrafficState&,
                        const EgoControllerState& ctrl, Rng&) override {
    DecisionRecord rec;
    rec.step = obs.step;
    rec.psi_setpoint = ctrl.psi_setpoint;
    rec.policy = rule_based_decide(obs, th_, sim_.road);
    return rec;
  }

  std::optional<PolicyId> monitor(const Observation& obs,
                                  const EgoControllerState& ctrl) override {
    return rule_based_monitor(obs, ctrl, th_, sim_.road, sim_.ego);
  }

  AgentKind kind() const override { return AgentKind::RuleBased; }

 private:
  RuleThresholds th_;
  SimConfig sim_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentSettings& settings, const SimConfig& sim) {
  if (settings.kind == AgentKind::RuleBased) {
    return std::make_unique<RuleBasedAgent>(settings.thresholds, sim);
  }
  return std::make_unique<PlanningAgent>(settings, sim);
}

}  // namespace lvt
