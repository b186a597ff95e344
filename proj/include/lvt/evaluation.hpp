#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lvt/baselines.hpp"
#include "lvt/episode.hpp"
#include "lvt/simulator.hpp"

namespace lvt {

/// Compact per-episode record kept by evaluations.
struct EpisodeSummary {
  AgentKind agent = AgentKind::Lvt;
  int iterations = 0;
  std::size_t episode = 0;
  std::uint64_t scenario_seed = 0;
  std::size_t vehicles = 0;
  EpisodeOutcome outcome = EpisodeOutcome::Timeout;
  std::optional<double> merge_time;
  bool safety_violated = false;
  bool hard_brake = false;
  bool gave_way = false;
  double total_reward = 0.0;
  std::optional<MergeEvent> merge_event;
  int decisions = 0;
};

EpisodeSummary summarize_episode(const EpisodeResult& r, std::size_t episode,
                                 std::uint64_t scenario_seed, std::size_t vehicles);

struct MetricsSummary {
  AgentKind agent = AgentKind::Lvt;
  int iterations = 0;
  int episodes = 0;
  double safety_violation_rate = 0.0;
  double mean_reward = 0.0;
  double reward_se = 0.0;
  /// Over violation-free merged episodes; nullopt if there are none.
  std::optional<double> mean_time_to_merge;
  double time_to_merge_se = 0.0;
  int merged_clean = 0;
  double hard_brake_rate = 0.0;
  double give_way_rate = 0.0;
};

MetricsSummary summarize(std::span<const EpisodeSummary> episodes, AgentKind agent,
                         int iterations);

/// Seeds of episode i under a master seed; shared by every agent.
std::uint64_t scenario_seed(std::uint64_t master, std::size_t episode);
std::uint64_t episode_seed(std::uint64_t master, std::size_t episode);

struct EvaluationConfig {
  std::vector<AgentKind> agents;
  int episodes = 100;
  std::vector<int> iteration_sweep{1, 4, 16, 64, 256, 1024};
  std::uint64_t master_seed = 0;
  AgentSettings base;  // kind and iteration count are overwritten per run
  SimConfig sim;
  EpisodeOptions options{2.0, false};
  int workers = 1;
  /// Called after each finished (agent, iterations) cell.
  std::function<void(const MetricsSummary&)> on_cell;
};

struct EvaluationResult {
  std::vector<MetricsSummary> cells;
  std::vector<EpisodeSummary> episodes;

  const MetricsSummary& cell(AgentKind agent, int iterations) const;
};

/// Runs every agent on the same scenario list for each iteration count. The
/// rule-based agent does not plan, so it runs once and its metrics are
/// reported for every iteration count.
EvaluationResult evaluate(const EvaluationConfig& cfg);

/// Runs `count` independent jobs on up to `workers` threads; results are
/// indexed by job so the worker count never changes them.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

/// Worker count from LVT_WORKERS, defaulting to 1.
int workers_from_env();

/// Thresholds at a percentile rank of merge-event TTC/TIV values, ignoring
/// events whose TTC exceeds `ttc_cutoff`. Throws if nothing remains.
RuleThresholds percentile_thresholds(std::span<const MergeEvent> events, double percentile,
                                     double ttc_cutoff = 10.0);

/// Merge events from rule-based episodes that merge as soon as the merge
/// zone is reached (zero thresholds).
std::vector<MergeEvent> collect_merge_events(int episodes, std::uint64_t master_seed,
                                             const SimConfig& sim, int workers = 1);

struct ThresholdSweepPoint {
  double percentile = 0.0;
  RuleThresholds thresholds;
  double hard_brake_rate = 0.0;
  double give_way_rate = 0.0;
  double safety_violation_rate = 0.0;
};

/// Rule-based agent with thresholds at each percentile rank, evaluated on a
/// common scenario list.
std::vector<ThresholdSweepPoint> threshold_sweep(std::span<const MergeEvent> events,
                                                 std::span<const double> percentiles,
                                                 int episodes, std::uint64_t master_seed,
                                                 const SimConfig& sim, int workers = 1);

}  // namespace lvt
