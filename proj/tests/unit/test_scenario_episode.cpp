#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvt/episode.hpp"
#include "lvt/errors.hpp"
#include "lvt/persistence.hpp"
#include "lvt/scenario.hpp"

using namespace lvt;

namespace {

// Every logged step must follow from the logged actions under the point-mass model.
void expect_replayable(const EpisodeResult& r, double dt) {
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
    const TraceRow& a = r.trace[i];
    const TraceRow& b = r.trace[i + 1];
    ASSERT_EQ(b.step, a.step + 1);
    ASSERT_NEAR(b.time - a.time, dt, 1e-9);
    const VehicleState ego = step_vehicle(a.ego, a.ego_action, dt);
    ASSERT_EQ(ego.x, b.ego.x) << "step " << a.step;
    ASSERT_EQ(ego.y, b.ego.y);
    ASSERT_EQ(ego.vx, b.ego.vx);
    ASSERT_EQ(a.others.size(), b.others.size());
    for (std::size_t v = 0; v < a.others.size(); ++v) {
      const VehicleState next = step_vehicle(a.others[v], {a.other_accelerations[v], 0}, dt);
      ASSERT_EQ(next.x, b.others[v].x);
      ASSERT_EQ(next.vx, b.others[v].vx);
    }
  }
}

}  // namespace

TEST(CaseStudy, LayoutsAndDrivers) {
  const ScenarioConfig c1 = case_study(1), c2 = case_study(2), c3 = case_study(3);
  EXPECT_EQ(c1.ego_vx, 12.8);
  ASSERT_GE(c1.vehicles.size(), 3u);
  EXPECT_EQ(c1.vehicles[2].psi, 0.5);
  EXPECT_EQ(c2.vehicles[2].psi, 0.9);
  EXPECT_EQ(c3.vehicles[2].psi, 0.5);
  ASSERT_EQ(c3.overrides.size(), 1u);
  EXPECT_EQ(c3.overrides[0].time, 3.0);
  EXPECT_EQ(c3.overrides[0].vehicle, 2u);
  EXPECT_EQ(c3.overrides[0].psi, 0.9);
  EXPECT_TRUE(c1.overrides.empty());
  for (std::size_t i = 0; i < c1.vehicles.size(); ++i) {
    EXPECT_EQ(c1.vehicles[i].x, c2.vehicles[i].x);
    EXPECT_EQ(c1.vehicles[i].x, c3.vehicles[i].x);
  }
  EXPECT_THROW(case_study(4), ConfigError);
}

TEST(RandomScenario, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ScenarioConfig a = generate_random_scenario(seed);
    const ScenarioConfig b = generate_random_scenario(seed);
    ASSERT_EQ(io::scenario_to_json(a).dump(), io::scenario_to_json(b).dump());
    ASSERT_NO_THROW(a.validate());
    ASSERT_GE(a.vehicles.size(), 4u);
    ASSERT_LE(a.vehicles.size(), 7u);
    for (std::size_t i = 1; i < a.vehicles.size(); ++i) {
      ASSERT_LT(a.vehicles[i].x, a.vehicles[i - 1].x);
    }
  }
}

TEST(RandomScenario, VehicleCountUniform) {
  std::vector<int> counts(4, 0);
  const int n = 4000;
  for (int seed = 0; seed < n; ++seed) {
    ++counts[generate_random_scenario(static_cast<std::uint64_t>(seed)).vehicles.size() - 4];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  EXPECT_LT(chi2, 16.27);  // 3 degrees of freedom, 0.999 quantile
}

TEST(ScenarioConfig, ValidationErrors) {
  ScenarioConfig s = case_study(1);
  s.vehicles[1].x = s.vehicles[0].x - 2.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = case_study(1);
  s.vehicles[0].psi = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = case_study(3);
  s.overrides[0].time = 100.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = case_study(3);
  s.overrides[0].vehicle = 42;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(InitialTraffic, RandomPsiDrawnPerVehicle) {
  ScenarioConfig s = case_study(1);
  s.vehicles[0].psi.reset();
  Rng a(1), b(1);
  const TrafficState x = initial_traffic(s, a);
  const TrafficState y = initial_traffic(s, b);
  EXPECT_EQ(x.internals[0].psi, y.internals[0].psi);
  EXPECT_GE(x.internals[0].psi, 0.0);
  EXPECT_LE(x.internals[0].psi, 1.0);
  EXPECT_EQ(x.internals[2].psi, 0.5);
  EXPECT_EQ(x.ego.vx, 12.8);
}

TEST(Episode, DeterministicForSeed) {
  AgentSettings settings;
  settings.planner.iterations = 16;
  const ScenarioConfig sc = generate_random_scenario(77);
  const EpisodeResult a = run_episode(sc, settings, 5);
  const EpisodeResult b = run_episode(sc, settings, 5);
  EXPECT_EQ(io::episode_to_json(a).dump(), io::episode_to_json(b).dump());
}

TEST(Episode, TraceReplaysAndFlagsAgree) {
  for (AgentKind k : {AgentKind::Lvt, AgentKind::RuleBased, AgentKind::MctsNormal}) {
    AgentSettings settings;
    settings.kind = k;
    settings.planner.iterations = 16;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const ScenarioConfig sc = generate_random_scenario(40 + seed);
      const EpisodeResult r = run_episode(sc, settings, seed);
      expect_replayable(r, sc.sim.dt());
      const bool any_violation = std::any_of(r.trace.begin(), r.trace.end(),
                                             [](const TraceRow& t) { return t.flags.safety_violated; });
      EXPECT_EQ(any_violation, r.safety_violated);
      EXPECT_EQ(r.merge_time.has_value(), r.outcome == EpisodeOutcome::Merged);
      if (r.merge_time) {
        EXPECT_TRUE(r.merge_event.has_value());
        EXPECT_LE(r.merge_event->time, *r.merge_time + 1e-9);
      }
    }
  }
}

TEST(Episode, OverrideChangesDriverAtThreeSeconds) {
  AgentSettings settings;
  settings.kind = AgentKind::RuleBased;
  const EpisodeResult r = run_episode(case_study(3), settings, 1);
  ASSERT_GT(r.trace.size(), 40u);
  EXPECT_EQ(r.trace[29].other_psi[2], 0.5);
  EXPECT_EQ(r.trace[30].other_psi[2], 0.9);
}

TEST(Episode, TimeoutWhenAgentNeverMerges) {
  ScenarioConfig sc = case_study(1);
  sc.sim.time_limit = 3.0;
  AgentSettings settings;
  settings.kind = AgentKind::RuleBased;
  const EpisodeResult r = run_episode(sc, settings, 1);
  EXPECT_EQ(r.outcome, EpisodeOutcome::Timeout);
  EXPECT_FALSE(r.merge_time.has_value());
  EXPECT_EQ(r.trace.size(), 30u);
  EXPECT_NEAR(r.total_reward, 3 * -0.3, 1e-12);
}
