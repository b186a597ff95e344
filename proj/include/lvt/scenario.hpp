#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvt/kinematics.hpp"
#include "lvt/rng.hpp"
#include "lvt/simulator.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

struct VehicleSpec {
  double x = 0.0;
  double vx = 0.0;
  std::optional<double> psi;  // nullopt: drawn uniformly from [0, 1]
};

/// Mid-episode change of a driver's aggressiveness.
struct PsiOverride {
  double time = 0.0;
  std::size_t vehicle = 0;
  double psi = 0.5;
};

struct ScenarioConfig {
  std::string name;
  SimConfig sim;
  double ego_x = 0.0;
  double ego_vx = 12.8;
  std::vector<VehicleSpec> vehicles;  // main-road vehicles, front to back
  std::vector<PsiOverride> overrides;
  std::uint64_t seed = 0;

  /// Throws ConfigError on overlaps, psi outside [0, 1] or bad override times.
  void validate() const;
};

/// Initial world state. Random aggressiveness values are drawn from `rng`.
TrafficState initial_traffic(const ScenarioConfig& cfg, Rng& rng);

/// Case studies 1-3: identical layouts that differ in the third vehicle's
/// driver (normal, aggressive, normal turning aggressive at t = 3 s).
ScenarioConfig case_study(int id);

/// Randomized scenario: 4 to 7 main-road vehicles with uniform
/// aggressiveness, spaced beyond each follower's desired gap, and the agent
/// on the ramp.
ScenarioConfig generate_random_scenario(std::uint64_t seed, const SimConfig& base = {});

}  // namespace lvt
