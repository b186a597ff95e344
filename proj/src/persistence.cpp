#include "lvt/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lvt/errors.hpp"

namespace lvt::io {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("malformed number '" + s + "'");
  }
  return v;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_num(s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Reads the format comment and the header; returns header fields.
std::vector<std::string> read_preamble(std::istream& in, std::string_view format) {
  std::string line;
  if (!std::getline(in, line) || line != "# " + std::string(format)) {
    throw ConfigError("expected format line '# " + std::string(format) + "'");
  }
  if (!std::getline(in, line)) throw ConfigError("missing CSV header");
  return split(line);
}

json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json opt_json(const std::optional<double>& v) { return v ? num_json(*v) : json(nullptr); }

double inf_if_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::vector<std::string> trace_header() {
  std::vector<std::string> h = {"step",  "time",  "policy", "psi_setpoint",
                                "ego_x", "ego_y", "ego_vx", "ego_ax",
                                "ego_vy", "merged", "hard_brake", "safety_violated"};
  for (std::size_t k = 0; k < kTraceSlots; ++k) {
    for (const char* f : {"x", "y", "vx", "ax", "psi"}) {
      h.push_back("v" + std::to_string(k) + "_" + f);
    }
  }
  return h;
}

const std::vector<std::string> kEpisodeHeader = {
    "agent",   "iterations", "episode",   "scenario_seed",    "vehicles",
    "outcome", "merge_time", "safety_violated", "hard_brake", "gave_way",
    "total_reward", "merge_event_time", "merge_ttc", "merge_tiv", "decisions"};

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, const EpisodeResult& r) {
  out << "# " << kTraceFormat << '\n';
  write_line(out, trace_header());
  for (const TraceRow& row : r.trace) {
    if (row.others.size() > kTraceSlots) {
      throw ConfigError("trace supports at most 8 main-road vehicles");
    }
    std::vector<std::string> c = {std::to_string(row.step),
                                  num(row.time),
                                  std::string(to_string(row.policy)),
                                  num(row.psi_setpoint),
                                  num(row.ego.x),
                                  num(row.ego.y),
                                  num(row.ego.vx),
                                  num(row.ego_action.ax),
                                  num(row.ego_action.vy),
                                  row.flags.merged ? "1" : "0",
                                  row.flags.hard_brake ? "1" : "0",
                                  row.flags.safety_violated ? "1" : "0"};
    for (std::size_t k = 0; k < kTraceSlots; ++k) {
      if (k < row.others.size()) {
        c.push_back(num(row.others[k].x));
        c.push_back(num(row.others[k].y));
        c.push_back(num(row.others[k].vx));
        c.push_back(num(row.other_accelerations.at(k)));
        c.push_back(num(row.other_psi.at(k)));
      } else {
        c.insert(c.end(), 5, std::string());
      }
    }
    write_line(out, c);
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  const auto header = read_preamble(in, kTraceFormat);
  if (header != trace_header()) throw ConfigError("unexpected trace header");
  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != header.size()) throw ConfigError("trace row has wrong field count");
    TraceRow row;
    row.step = std::stoi(c[0]);
    row.time = parse_num(c[1]);
    const auto policy = policy_from_string(c[2]);
    if (!policy) throw ConfigError("unknown policy '" + c[2] + "'");
    row.policy = *policy;
    row.psi_setpoint = parse_num(c[3]);
    row.ego = {parse_num(c[4]), parse_num(c[5]), parse_num(c[6])};
    row.ego_action = {parse_num(c[7]), parse_num(c[8])};
    row.flags.merged = c[9] == "1";
    row.flags.hard_brake = c[10] == "1";
    row.flags.safety_violated = c[11] == "1";
    for (std::size_t k = 0; k < kTraceSlots; ++k) {
      const std::size_t b = 12 + 5 * k;
      if (c[b].empty()) continue;
      row.others.push_back({parse_num(c[b]), parse_num(c[b + 1]), parse_num(c[b + 2])});
      row.other_accelerations.push_back(parse_num(c[b + 3]));
      row.other_psi.push_back(parse_num(c[b + 4]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_episodes_csv(std::ostream& out, std::span<const EpisodeSummary> episodes) {
  out << "# " << kEpisodesFormat << '\n';
  write_line(out, kEpisodeHeader);
  for (const EpisodeSummary& e : episodes) {
    write_line(out, {std::string(to_string(e.agent)),
                     std::to_string(e.iterations),
                     std::to_string(e.episode),
                     std::to_string(e.scenario_seed),
                     std::to_string(e.vehicles),
                     std::string(to_string(e.outcome)),
                     opt_num(e.merge_time),
                     e.safety_violated ? "1" : "0",
                     e.hard_brake ? "1" : "0",
                     e.gave_way ? "1" : "0",
                     num(e.total_reward),
                     e.merge_event ? num(e.merge_event->time) : "",
                     e.merge_event ? num(e.merge_event->ttc) : "",
                     e.merge_event ? num(e.merge_event->tiv) : "",
                     std::to_string(e.decisions)});
  }
}

std::vector<EpisodeSummary> read_episodes_csv(std::istream& in) {
  if (read_preamble(in, kEpisodesFormat) != kEpisodeHeader) {
    throw ConfigError("unexpected episodes header");
  }
  std::vector<EpisodeSummary> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != kEpisodeHeader.size()) throw ConfigError("episode row has wrong field count");
    EpisodeSummary e;
    const auto agent = agent_from_string(c[0]);
    const auto outcome = outcome_from_string(c[5]);
    if (!agent || !outcome) throw ConfigError("unknown agent or outcome in episodes file");
    e.agent = *agent;
    e.iterations = std::stoi(c[1]);
    e.episode = std::stoull(c[2]);
    e.scenario_seed = std::stoull(c[3]);
    e.vehicles = std::stoull(c[4]);
    e.outcome = *outcome;
    e.merge_time = parse_opt(c[6]);
    e.safety_violated = c[7] == "1";
    e.hard_brake = c[8] == "1";
    e.gave_way = c[9] == "1";
    e.total_reward = parse_num(c[10]);
    if (!c[11].empty()) e.merge_event = MergeEvent{parse_num(c[11]), parse_num(c[12]), parse_num(c[13])};
    e.decisions = std::stoi(c[14]);
    out.push_back(e);
  }
  return out;
}

json episode_to_json(const EpisodeResult& r) {
  json j;
  j["format"] = kEpisodeFormat;
  j["scenario"] = r.scenario;
  j["agent"] = to_string(r.agent);
  j["iterations"] = r.iterations;
  j["seed"] = r.seed;
  j["outcome"] = to_string(r.outcome);
  j["merge_time"] = opt_json(r.merge_time);
  j["safety_violated"] = r.safety_violated;
  j["hard_brake"] = r.hard_brake;
  j["gave_way"] = r.gave_way;
  j["total_reward"] = r.total_reward;
  if (r.merge_event) {
    j["merge_event"] = {{"time", r.merge_event->time},
                        {"ttc", num_json(r.merge_event->ttc)},
                        {"tiv", num_json(r.merge_event->tiv)}};
  } else {
    j["merge_event"] = nullptr;
  }
  json decisions = json::array();
  for (const DecisionRecord& d : r.decisions) {
    json children = json::array();
    for (const RootChildStat& c : d.root_children) {
      children.push_back({{"policy", to_string(c.policy)}, {"visits", c.visits}, {"value", c.value}});
    }
    decisions.push_back({{"step", d.step},
                         {"policy", to_string(d.policy)},
                         {"psi_setpoint", d.psi_setpoint},
                         {"tree_nodes", d.tree_nodes},
                         {"belief_updates", d.belief_updates},
                         {"root_children", children},
                         {"psi_posterior", d.psi_posterior}});
  }
  j["decisions"] = decisions;
  return j;
}

json metrics_to_json(std::span<const MetricsSummary> cells, const EvaluationConfig& cfg) {
  json j;
  j["format"] = kMetricsFormat;
  j["master_seed"] = cfg.master_seed;
  j["episodes"] = cfg.episodes;
  j["iteration_sweep"] = cfg.iteration_sweep;
  json agents = json::array();
  for (AgentKind a : cfg.agents) agents.push_back(to_string(a));
  j["agents"] = agents;
  json out = json::array();
  for (const MetricsSummary& m : cells) {
    out.push_back({{"agent", to_string(m.agent)},
                   {"iterations", m.iterations},
                   {"episodes", m.episodes},
                   {"safety_violation_rate", m.safety_violation_rate},
                   {"mean_reward", m.mean_reward},
                   {"reward_se", m.reward_se},
                   {"mean_time_to_merge", opt_json(m.mean_time_to_merge)},
                   {"time_to_merge_se", m.time_to_merge_se},
                   {"merged_clean", m.merged_clean},
                   {"hard_brake_rate", m.hard_brake_rate},
                   {"give_way_rate", m.give_way_rate}});
  }
  j["cells"] = out;
  return j;
}

json scenario_to_json(const ScenarioConfig& s) {
  json vehicles = json::array();
  for (const VehicleSpec& v : s.vehicles) {
    vehicles.push_back({{"x", v.x}, {"vx", v.vx}, {"psi", v.psi ? json(*v.psi) : json("random")}});
  }
  json overrides = json::array();
  for (const PsiOverride& o : s.overrides) {
    overrides.push_back({{"time", o.time}, {"vehicle", o.vehicle}, {"psi", o.psi}});
  }
  const RoadGeometry& r = s.sim.road;
  return {{"format", kScenarioFormat},
          {"name", s.name},
          {"seed", s.seed},
          {"time_limit", s.sim.time_limit},
          {"noise", {{"sigma_x", s.sim.noise.sigma_x}, {"sigma_y", s.sim.noise.sigma_y}}},
          {"road",
           {{"main_road_length", r.main_road_length},
            {"ramp_length", r.ramp_length},
            {"merge_zone_length", r.merge_zone_length},
            {"lane_width", r.lane_width},
            {"main_lane_center_y", r.main_lane_center_y},
            {"ramp_lane_center_y", r.ramp_lane_center_y},
            {"ramp_origin_x", r.ramp_origin_x}}},
          {"ego", {{"x", s.ego_x}, {"vx", s.ego_vx}}},
          {"vehicles", vehicles},
          {"overrides", overrides}};
}

ScenarioConfig scenario_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kScenarioFormat) {
      throw ConfigError("unsupported scenario format '" + j.at("format").get<std::string>() + "'");
    }
    ScenarioConfig s;
    s.name = j.value("name", std::string("scenario"));
    s.seed = j.value("seed", std::uint64_t{0});
    s.sim.time_limit = j.value("time_limit", s.sim.time_limit);
    if (j.contains("noise")) {
      s.sim.noise.sigma_x = j["noise"].value("sigma_x", s.sim.noise.sigma_x);
      s.sim.noise.sigma_y = j["noise"].value("sigma_y", s.sim.noise.sigma_y);
    }
    if (j.contains("road")) {
      const json& r = j["road"];
      RoadGeometry& g = s.sim.road;
      g.main_road_length = r.value("main_road_length", g.main_road_length);
      g.ramp_length = r.value("ramp_length", g.ramp_length);
      g.merge_zone_length = r.value("merge_zone_length", g.merge_zone_length);
      g.lane_width = r.value("lane_width", g.lane_width);
      g.main_lane_center_y = r.value("main_lane_center_y", g.main_lane_center_y);
      g.ramp_lane_center_y = r.value("ramp_lane_center_y", g.ramp_lane_center_y);
      g.ramp_origin_x = r.value("ramp_origin_x", g.ramp_origin_x);
    }
    s.ego_x = j.at("ego").at("x").get<double>();
    s.ego_vx = j.at("ego").at("vx").get<double>();
    for (const json& v : j.at("vehicles")) {
      VehicleSpec spec;
      spec.x = v.at("x").get<double>();
      spec.vx = v.at("vx").get<double>();
      const json& psi = v.at("psi");
      if (psi.is_string()) {
        if (psi.get<std::string>() != "random") throw ConfigError("psi must be a number or \"random\"");
      } else {
        spec.psi = psi.get<double>();
      }
      s.vehicles.push_back(spec);
    }
    if (j.contains("overrides")) {
      for (const json& o : j["overrides"]) {
        s.overrides.push_back(
            {o.at("time").get<double>(), o.at("vehicle").get<std::size_t>(), o.at("psi").get<double>()});
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  try {
    return scenario_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_scenario(const std::filesystem::path& path, const ScenarioConfig& s) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << scenario_to_json(s).dump(2) << '\n';
}

void save_episode(const std::filesystem::path& dir, const EpisodeResult& r) {
  std::filesystem::create_directories(dir);
  std::ofstream trace(dir / "trace.csv");
  std::ofstream episode(dir / "episode.json");
  if (!trace || !episode) throw ConfigError("cannot write episode files in " + dir.string());
  write_trace_csv(trace, r);
  episode << episode_to_json(r).dump(2) << '\n';
}

std::vector<MergeEvent> merge_events_from_dir(const std::filesystem::path& dir) {
  std::vector<MergeEvent> events;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const auto name = path.filename();
    if (name == "episode.json") {
      std::ifstream in(path);
      const json j = json::parse(in);
      if (j.at("format").get<std::string>() != kEpisodeFormat) {
        throw ConfigError(path.string() + ": unsupported format");
      }
      const json& e = j.at("merge_event");
      if (!e.is_null()) {
        events.push_back({e.at("time").get<double>(), inf_if_null(e.at("ttc")), inf_if_null(e.at("tiv"))});
      }
    } else if (name == "episodes.csv") {
      std::ifstream in(path);
      for (const EpisodeSummary& s : read_episodes_csv(in)) {
        if (s.merge_event) events.push_back(*s.merge_event);
      }
    }
  }
  return events;
}

}  // namespace lvt::io
