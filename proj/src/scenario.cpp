#include "lvt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvt/driver_model.hpp"
#include "lvt/errors.hpp"

namespace lvt {

void ScenarioConfig::validate() const {
  sim.validate();
  const double length = sim.drivers.vehicle_length;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const VehicleSpec& v = vehicles[i];
    if (!std::isfinite(v.x) || !std::isfinite(v.vx) || v.vx < 0.0) {
      throw ConfigError("vehicle " + std::to_string(i) + ": invalid state");
    }
    if (v.psi && !(*v.psi >= 0.0 && *v.psi <= 1.0)) {
      throw ConfigError("vehicle " + std::to_string(i) + ": psi outside [0, 1]");
    }
    for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
      if (std::abs(vehicles[j].x - v.x) < length) {
        throw ConfigError("vehicles " + std::to_string(i) + " and " + std::to_string(j) +
                          " overlap");
      }
    }
  }
  if (!std::isfinite(ego_x) || !(ego_vx >= 0.0) || ego_x >= sim.road.merge_point()) {
    throw ConfigError("ego must start on the ramp with a non-negative speed");
  }
  for (const PsiOverride& o : overrides) {
    if (o.vehicle >= vehicles.size()) throw ConfigError("override names an unknown vehicle");
    if (!(o.time >= 0.0 && o.time <= sim.time_limit)) {
      throw ConfigError("override time outside the episode");
    }
    if (!(o.psi >= 0.0 && o.psi <= 1.0)) throw ConfigError("override psi outside [0, 1]");
  }
}

TrafficState initial_traffic(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  TrafficState s;
  s.ego = {cfg.ego_x, cfg.sim.road.ramp_lane_center_y, cfg.ego_vx};
  for (const VehicleSpec& v : cfg.vehicles) {
    const double psi = v.psi ? *v.psi : uniform01(rng);
    s.others.push_back({v.x, cfg.sim.road.main_lane_center_y, v.vx});
    s.internals.push_back(internal_from_aggressiveness(psi, cfg.sim.drivers));
  }
  return s;
}

ScenarioConfig case_study(int id) {
  if (id < 1 || id > 3) throw ConfigError("case study id must be 1, 2 or 3");
  ScenarioConfig c;
  c.name = "case" + std::to_string(id);
  c.ego_x = 35.0;
  c.ego_vx = 12.8;
  c.vehicles = {
      {155.0, 19.0, 0.5},
      {115.0, 19.0, 0.5},
      {-64.0, 24.75, 0.5},  // v3
      {-235.0, 20.0, 0.5},
  };
  if (id == 2) c.vehicles[2].psi = 0.9;
  if (id == 3) c.overrides.push_back({3.0, 2, 0.9});
  c.seed = static_cast<std::uint64_t>(id);
  return c;
}

ScenarioConfig generate_random_scenario(std::uint64_t seed, const SimConfig& base) {
  Rng rng(derive_seed(seed, 0, 0x5CE7A210ull));
  ScenarioConfig c;
  c.name = "random-" + std::to_string(seed);
  c.sim = base;
  c.seed = seed;

  const std::size_t n = 4 + uniform_index(rng, 4);
  double x = 150.0 + 150.0 * uniform01(rng);
  for (std::size_t i = 0; i < n; ++i) {
    VehicleSpec v;
    v.psi = uniform01(rng);
    const IdmParams p = params_from_aggressiveness(*v.psi, base.drivers);
    v.vx = std::min(p.v_des, 16.0 + 6.0 * uniform01(rng));
    if (i > 0) {
      const double desired = idm_desired_gap(v.vx, 0.0, p);
      x -= base.drivers.vehicle_length + desired * (1.0 + 2.0 * uniform01(rng));
    }
    v.x = x;
    c.vehicles.push_back(v);
  }
  c.ego_x = 40.0 * uniform01(rng);
  c.ego_vx = 10.0 + 5.0 * uniform01(rng);
  return c;
}

}  // namespace lvt
