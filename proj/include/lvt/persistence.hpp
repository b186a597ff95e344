#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lvt/episode.hpp"
#include "lvt/evaluation.hpp"
#include "lvt/scenario.hpp"

namespace lvt::io {

inline constexpr std::string_view kTraceFormat = "lvt-trace v1";
inline constexpr std::string_view kEpisodesFormat = "lvt-episodes v1";
inline constexpr std::string_view kEpisodeFormat = "lvt-episode v1";
inline constexpr std::string_view kMetricsFormat = "lvt-metrics v1";
inline constexpr std::string_view kScenarioFormat = "lvt-scenario v1";
inline constexpr std::string_view kThresholdsFormat = "lvt-thresholds v1";
inline constexpr std::size_t kTraceSlots = 8;  // main-road vehicle columns in a trace

/// One row per simulation step; main-road vehicles occupy fixed column slots
/// v0..v7 (empty fields for absent vehicles).
void write_trace_csv(std::ostream& out, const EpisodeResult& r);
std::vector<TraceRow> read_trace_csv(std::istream& in);

void write_episodes_csv(std::ostream& out, std::span<const EpisodeSummary> episodes);
std::vector<EpisodeSummary> read_episodes_csv(std::istream& in);

nlohmann::json episode_to_json(const EpisodeResult& r);
nlohmann::json metrics_to_json(std::span<const MetricsSummary> cells, const EvaluationConfig& cfg);

nlohmann::json scenario_to_json(const ScenarioConfig& s);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const ScenarioConfig& s);

/// Writes trace.csv and episode.json into `dir` (created if missing).
void save_episode(const std::filesystem::path& dir, const EpisodeResult& r);

/// Merge events found in episode.json and episodes.csv files below `dir`.
std::vector<MergeEvent> merge_events_from_dir(const std::filesystem::path& dir);

}  // namespace lvt::io
