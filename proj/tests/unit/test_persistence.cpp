#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "lvt/errors.hpp"
#include "lvt/persistence.hpp"

using namespace lvt;
namespace fs = std::filesystem;

namespace {

EpisodeResult short_episode(AgentKind kind = AgentKind::Lvt) {
  AgentSettings settings;
  settings.kind = kind;
  settings.planner.iterations = 8;
  return run_episode(case_study(1), settings, 2);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lvt_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(TraceCsv, RoundTripsExactly) {
  const EpisodeResult r = short_episode();
  std::stringstream ss;
  io::write_trace_csv(ss, r);
  const auto rows = io::read_trace_csv(ss);
  ASSERT_EQ(rows.size(), r.trace.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TraceRow& a = r.trace[i];
    const TraceRow& b = rows[i];
    ASSERT_EQ(a.step, b.step);
    ASSERT_EQ(a.time, b.time);
    ASSERT_EQ(a.policy, b.policy);
    ASSERT_EQ(a.ego.x, b.ego.x);
    ASSERT_EQ(a.ego.y, b.ego.y);
    ASSERT_EQ(a.ego_action.ax, b.ego_action.ax);
    ASSERT_EQ(a.flags.safety_violated, b.flags.safety_violated);
    ASSERT_EQ(a.others.size(), b.others.size());
    for (std::size_t v = 0; v < a.others.size(); ++v) {
      ASSERT_EQ(a.others[v].x, b.others[v].x);
      ASSERT_EQ(a.other_accelerations[v], b.other_accelerations[v]);
      ASSERT_EQ(a.other_psi[v], b.other_psi[v]);
    }
  }
}

TEST(TraceCsv, RejectsWrongFormatLine) {
  std::stringstream ss("# lvt-trace v0\nstep\n");
  EXPECT_THROW(io::read_trace_csv(ss), ConfigError);
  std::stringstream missing;
  EXPECT_THROW(io::read_trace_csv(missing), ConfigError);
}

TEST(EpisodesCsv, RoundTrip) {
  EpisodeSummary a;
  a.agent = AgentKind::Qmdp;
  a.iterations = 64;
  a.episode = 3;
  a.scenario_seed = 123456789012345ull;
  a.vehicles = 6;
  a.outcome = EpisodeOutcome::Merged;
  a.merge_time = 11.3;
  a.total_reward = 2.7000000000000002;
  a.merge_event = MergeEvent{9.1, std::numeric_limits<double>::infinity(), 2.25};
  a.decisions = 9;
  EpisodeSummary b;
  b.outcome = EpisodeOutcome::Timeout;
  b.safety_violated = true;
  std::vector<EpisodeSummary> in{a, b};
  std::stringstream ss;
  io::write_episodes_csv(ss, in);
  const auto out = io::read_episodes_csv(ss);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].agent, AgentKind::Qmdp);
  EXPECT_EQ(out[0].scenario_seed, a.scenario_seed);
  EXPECT_EQ(out[0].merge_time, 11.3);
  EXPECT_EQ(out[0].total_reward, a.total_reward);
  ASSERT_TRUE(out[0].merge_event.has_value());
  EXPECT_EQ(out[0].merge_event->ttc, std::numeric_limits<double>::infinity());
  EXPECT_FALSE(out[1].merge_time.has_value());
  EXPECT_TRUE(out[1].safety_violated);
  EXPECT_FALSE(out[1].merge_event.has_value());
}

TEST(ScenarioJson, RoundTripAndErrors) {
  for (int id = 1; id <= 3; ++id) {
    const ScenarioConfig s = case_study(id);
    const ScenarioConfig back = io::scenario_from_json(io::scenario_to_json(s));
    EXPECT_EQ(io::scenario_to_json(back).dump(), io::scenario_to_json(s).dump());
  }
  ScenarioConfig r = generate_random_scenario(9);
  r.vehicles[0].psi.reset();
  EXPECT_FALSE(io::scenario_from_json(io::scenario_to_json(r)).vehicles[0].psi.has_value());

  auto j = io::scenario_to_json(case_study(1));
  j["format"] = "lvt-scenario v9";
  EXPECT_THROW(io::scenario_from_json(j), ConfigError);
  j = io::scenario_to_json(case_study(1));
  j.erase("ego");
  EXPECT_THROW(io::scenario_from_json(j), ConfigError);
  EXPECT_THROW(io::load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST(ScenarioJson, ShippedCaseFilesMatchBuiltins) {
  for (int id = 1; id <= 3; ++id) {
    const fs::path file = fs::path(LVT_SCENARIO_DIR) / ("case" + std::to_string(id) + ".json");
    const ScenarioConfig loaded = io::load_scenario(file);
    EXPECT_EQ(io::scenario_to_json(loaded).dump(), io::scenario_to_json(case_study(id)).dump())
        << file;
  }
}

TEST(EpisodeFiles, SaveAndCollectMergeEvents) {
  const fs::path dir = scratch("episode");
  const EpisodeResult r = short_episode(AgentKind::RuleBased);
  io::save_episode(dir / "run", r);
  ASSERT_TRUE(fs::exists(dir / "run" / "trace.csv"));
  std::ifstream in(dir / "run" / "episode.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("format"), "lvt-episode v1");
  EXPECT_EQ(j.at("decisions").size(), r.decisions.size());

  EpisodeSummary extra;
  extra.merge_event = MergeEvent{4.0, 6.0, 1.5};
  std::ofstream csv(dir / "episodes.csv");
  io::write_episodes_csv(csv, std::vector<EpisodeSummary>{extra});
  csv.close();

  const auto events = io::merge_events_from_dir(dir);
  const std::size_t expected = (r.merge_event ? 1u : 0u) + 1u;
  ASSERT_EQ(events.size(), expected);
  fs::remove_all(dir);
}

TEST(MetricsJson, Schema) {
  EvaluationConfig cfg;
  cfg.agents = {AgentKind::RuleBased};
  cfg.episodes = 2;
  cfg.iteration_sweep = {1};
  const EvaluationResult res = evaluate(cfg);
  const auto j = io::metrics_to_json(res.cells, cfg);
  EXPECT_EQ(j.at("format"), "lvt-metrics v1");
  ASSERT_EQ(j.at("cells").size(), 1u);
  for (const char* key : {"agent", "iterations", "episodes", "safety_violation_rate", "mean_reward",
                          "reward_se", "mean_time_to_merge", "time_to_merge_se", "merged_clean",
                          "hard_brake_rate", "give_way_rate"}) {
    EXPECT_TRUE(j["cells"][0].contains(key)) << key;
  }
}
