// Command-line entry point: single episodes, randomized evaluations and
// rule threshold extraction.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvt/baselines.hpp"
#include "lvt/episode.hpp"
#include "lvt/errors.hpp"
#include "lvt/evaluation.hpp"
#include "lvt/persistence.hpp"
#include "lvt/scenario.hpp"

namespace fs = std::filesystem;
using namespace lvt;

namespace {

ScenarioConfig resolve_scenario(const std::string& spec) {
  if (spec == "case1" || spec == "case2" || spec == "case3") return case_study(spec.back() - '0');
  if (spec.rfind("random:", 0) == 0) return generate_random_scenario(std::stoull(spec.substr(7)));
  return io::load_scenario(spec);
}

AgentKind parse_agent(const std::string& name) {
  const auto kind = agent_from_string(name);
  if (!kind) throw ConfigError("unknown agent '" + name + "'");
  return *kind;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramp-merge decision making: episodes, evaluations, rule thresholds"};
  app.require_subcommand(1);

  std::string scenario = "case1", agent = "lvt", out_dir = "out";
  int iters = 150;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run-episode", "Run one closed-loop episode");
  run->add_option("--scenario", scenario, "Scenario file, case1|case2|case3 or random:<seed>");
  run->add_option("--agent", agent, "lvt|omniscient|mcts_prior|mcts_normal|qmdp|rule_based");
  run->add_option("--iters", iters, "Planning iterations per decision")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Episode seed");
  run->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> agents{"lvt", "omniscient", "mcts_prior", "mcts_normal", "qmdp",
                                  "rule_based"};
  int episodes = 100;
  std::vector<int> sweep{1, 4, 16, 64, 256, 1024};
  auto* eval = app.add_subcommand("evaluate", "Randomized evaluation over an iteration sweep");
  eval->add_option("--agents", agents, "Agents to evaluate")->delimiter(',');
  eval->add_option("--episodes", episodes, "Episodes per cell")->check(CLI::PositiveNumber);
  eval->add_option("--iters-sweep", sweep, "Iteration counts")->delimiter(',');
  eval->add_option("--seed", seed, "Master seed");
  eval->add_option("--out", out_dir, "Output directory");

  double percentile = 50.0;
  std::string from_dir;
  auto* thr = app.add_subcommand("thresholds", "Rule thresholds from recorded merge events");
  thr->add_option("--percentile", percentile, "Percentile rank")->check(CLI::Range(0.0, 100.0));
  thr->add_option("--from", from_dir, "Directory with episode.json / episodes.csv files")
      ->required();

  int case_id = 1;
  std::string scenario_out;
  auto* scen = app.add_subcommand("scenario", "Write a scenario file");
  scen->add_option("--case", case_id, "Case study id")->check(CLI::Range(1, 3));
  scen->add_option("--random", seed, "Random scenario seed (overrides --case)");
  scen->add_option("--out", scenario_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ScenarioConfig cfg = resolve_scenario(scenario);
      AgentSettings settings;
      settings.kind = parse_agent(agent);
      settings.planner.iterations = iters;
      const EpisodeResult r = run_episode(cfg, settings, seed);
      io::save_episode(out_dir, r);
      std::cout << cfg.name << " " << to_string(r.agent) << " outcome=" << to_string(r.outcome);
      if (r.merge_time) std::cout << " merge_time=" << *r.merge_time;
      std::cout << " violated=" << r.safety_violated << " reward=" << r.total_reward << '\n';
    } else if (*eval) {
      EvaluationConfig cfg;
      for (const auto& a : agents) cfg.agents.push_back(parse_agent(a));
      cfg.episodes = episodes;
      cfg.iteration_sweep = sweep;
      cfg.master_seed = seed;
      cfg.workers = workers_from_env();
      cfg.on_cell = [](const MetricsSummary& m) {
        std::cerr << to_string(m.agent) << " n=" << m.iterations
                  << " violations=" << m.safety_violation_rate << " reward=" << m.mean_reward
                  << "\n";
      };
      const EvaluationResult res = evaluate(cfg);
      fs::create_directories(out_dir);
      write_json(fs::path(out_dir) / "metrics.json", io::metrics_to_json(res.cells, cfg));
      std::ofstream csv(fs::path(out_dir) / "episodes.csv");
      io::write_episodes_csv(csv, res.episodes);
    } else if (*thr) {
      const auto events = io::merge_events_from_dir(from_dir);
      const RuleThresholds th = percentile_thresholds(events, percentile);
      nlohmann::json j{{"format", io::kThresholdsFormat},
                       {"percentile", percentile},
                       {"ttc_safe", th.ttc_safe},
                       {"tiv_safe", th.tiv_safe},
                       {"events", events.size()}};
      std::cout << j.dump(2) << '\n';
    } else if (*scen) {
      const ScenarioConfig cfg =
          scen->count("--random") ? generate_random_scenario(seed) : case_study(case_id);
      io::save_scenario(scenario_out, cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
