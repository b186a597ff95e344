#include "lvt/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "lvt/scenario.hpp"
#include "lvt/stats.hpp"

namespace lvt {

EpisodeSummary summarize_episode(const EpisodeResult& r, std::size_t episode,
                                 std::uint64_t scenario_seed, std::size_t vehicles) {
  EpisodeSummary s;
  s.agent = r.agent;
  s.iterations = r.iterations;
  s.episode = episode;
  s.scenario_seed = scenario_seed;
  s.vehicles = vehicles;
  s.outcome = r.outcome;
  s.merge_time = r.merge_time;
  s.safety_violated = r.safety_violated;
  s.hard_brake = r.hard_brake;
  s.gave_way = r.gave_way;
  s.total_reward = r.total_reward;
  s.merge_event = r.merge_event;
  s.decisions = static_cast<int>(r.decisions.size());
  return s;
}

MetricsSummary summarize(std::span<const EpisodeSummary> episodes, AgentKind agent,
                         int iterations) {
  MetricsSummary m;
  m.agent = agent;
  m.iterations = iterations;
  m.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return m;

  std::vector<double> rewards, merge_times;
  int violations = 0, brakes = 0, give_ways = 0;
  for (const EpisodeSummary& e : episodes) {
    rewards.push_back(e.total_reward);
    violations += e.safety_violated ? 1 : 0;
    brakes += e.hard_brake ? 1 : 0;
    give_ways += e.gave_way ? 1 : 0;
    if (e.merge_time && !e.safety_violated) merge_times.push_back(*e.merge_time);
  }
  const double n = static_cast<double>(episodes.size());
  m.safety_violation_rate = violations / n;
  m.hard_brake_rate = brakes / n;
  m.give_way_rate = give_ways / n;
  m.mean_reward = stats::mean(rewards);
  m.reward_se = stats::standard_error(rewards);
  m.merged_clean = static_cast<int>(merge_times.size());
  if (!merge_times.empty()) {
    m.mean_time_to_merge = stats::mean(merge_times);
    m.time_to_merge_se = stats::standard_error(merge_times);
  }
  return m;
}

std::uint64_t scenario_seed(std::uint64_t master, std::size_t episode) {
  return derive_seed(master, episode, 0x5CE0ull);
}

std::uint64_t episode_seed(std::uint64_t master, std::size_t episode) {
  return derive_seed(master, episode, 0xE915ull);
}

const MetricsSummary& EvaluationResult::cell(AgentKind agent, int iterations) const {
  for (const MetricsSummary& m : cells) {
    if (m.agent == agent && m.iterations == iterations) return m;
  }
  throw std::out_of_range("no evaluation cell for " + std::string(to_string(agent)) + " at " +
                          std::to_string(iterations) + " iterations");
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

int workers_from_env() {
  const char* v = std::getenv("LVT_WORKERS");
  if (!v) return 1;
  try {
    return std::max(1, std::stoi(v));
  } catch (const std::exception&) {
    return 1;
  }
}

namespace {

std::vector<EpisodeSummary> run_cell(const EvaluationConfig& cfg,
                                     const std::vector<ScenarioConfig>& scenarios,
                                     AgentKind agent, int iterations) {
  AgentSettings settings = cfg.base;
  settings.kind = agent;
  settings.planner.iterations = iterations;
  std::vector<EpisodeSummary> out(scenarios.size());
  parallel_for(scenarios.size(), cfg.workers, [&](std::size_t i) {
    const EpisodeResult r =
        run_episode(scenarios[i], settings, episode_seed(cfg.master_seed, i), cfg.options);
    out[i] = summarize_episode(r, i, scenarios[i].seed, scenarios[i].vehicles.size());
  });
  return out;
}

std::vector<ScenarioConfig> scenario_list(int episodes, std::uint64_t master,
                                          const SimConfig& sim) {
  std::vector<ScenarioConfig> list;
  for (int i = 0; i < episodes; ++i) {
    list.push_back(generate_random_scenario(scenario_seed(master, static_cast<std::size_t>(i)), sim));
  }
  return list;
}

}  // namespace

EvaluationResult evaluate(const EvaluationConfig& cfg) {
  if (cfg.episodes < 1) throw std::invalid_argument("evaluate: need at least one episode");
  const std::vector<ScenarioConfig> scenarios = scenario_list(cfg.episodes, cfg.master_seed, cfg.sim);

  EvaluationResult result;
  for (AgentKind agent : cfg.agents) {
    std::optional<std::vector<EpisodeSummary>> fixed;
    for (int n : cfg.iteration_sweep) {
      std::vector<EpisodeSummary> eps;
      if (!is_planning_agent(agent)) {
        if (!fixed) fixed = run_cell(cfg, scenarios, agent, n);
        eps = *fixed;
        for (EpisodeSummary& e : eps) e.iterations = n;
      } else {
        eps = run_cell(cfg, scenarios, agent, n);
      }
      MetricsSummary m = summarize(eps, agent, n);
      if (cfg.on_cell) cfg.on_cell(m);
      result.cells.push_back(m);
      result.episodes.insert(result.episodes.end(), eps.begin(), eps.end());
    }
  }
  return result;
}

RuleThresholds percentile_thresholds(std::span<const MergeEvent> events, double percentile,
                                     double ttc_cutoff) {
  std::vector<double> ttcs, tivs;
  for (const MergeEvent& e : events) {
    if (!(e.ttc <= ttc_cutoff)) continue;
    ttcs.push_back(e.ttc);
    tivs.push_back(e.tiv);
  }
  if (ttcs.empty()) throw std::invalid_argument("percentile_thresholds: no usable merge events");
  return RuleThresholds{stats::percentile(ttcs, percentile), stats::percentile(tivs, percentile)};
}

std::vector<MergeEvent> collect_merge_events(int episodes, std::uint64_t master_seed,
                                             const SimConfig& sim, int workers) {
  const std::vector<ScenarioConfig> scenarios = scenario_list(episodes, master_seed, sim);
  AgentSettings settings;
  settings.kind = AgentKind::RuleBased;
  settings.thresholds = RuleThresholds{0.0, 0.0};
  std::vector<std::optional<MergeEvent>> found(scenarios.size());
  parallel_for(scenarios.size(), workers, [&](std::size_t i) {
    found[i] = run_episode(scenarios[i], settings, episode_seed(master_seed, i),
                           EpisodeOptions{2.0, false})
                   .merge_event;
  });
  std::vector<MergeEvent> events;
  for (const auto& e : found) {
    if (e) events.push_back(*e);
  }
  return events;
}

std::vector<ThresholdSweepPoint> threshold_sweep(std::span<const MergeEvent> events,
                                                 std::span<const double> percentiles,
                                                 int episodes, std::uint64_t master_seed,
                                                 const SimConfig& sim, int workers) {
  const std::vector<ScenarioConfig> scenarios = scenario_list(episodes, master_seed, sim);
  std::vector<ThresholdSweepPoint> points;
  for (double p : percentiles) {
    ThresholdSweepPoint point;
    point.percentile = p;
    point.thresholds = percentile_thresholds(events, p);
    AgentSettings settings;
    settings.kind = AgentKind::RuleBased;
    settings.thresholds = point.thresholds;
    std::vector<EpisodeSummary> eps(scenarios.size());
    parallel_for(scenarios.size(), workers, [&](std::size_t i) {
      const EpisodeResult r = run_episode(scenarios[i], settings, episode_seed(master_seed, i),
                                          EpisodeOptions{2.0, false});
      eps[i] = summarize_episode(r, i, scenarios[i].seed, scenarios[i].vehicles.size());
    });
    const MetricsSummary m = summarize(eps, AgentKind::RuleBased, 0);
    point.hard_brake_rate = m.hard_brake_rate;
    point.give_way_rate = m.give_way_rate;
    point.safety_violation_rate = m.safety_violation_rate;
    points.push_back(point);
  }
  return points;
}

}  // namespace lvt
