#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lvt/driver_model.hpp"
#include "lvt/kinematics.hpp"

namespace lvt {

/// Full world state: the agent, the main-road vehicles (physical states and
/// their drivers' hidden internal states, index-aligned) and the simulation
/// step counter.
struct TrafficState {
  int step = 0;
  VehicleState ego;
  std::vector<VehicleState> others;
  std::vector<InternalState> internals;
};

/// What the agent perceives: noisy main-road vehicle states and its own
/// exact state. Vehicle ordering matches TrafficState.
struct Observation {
  int step = 0;
  VehicleState ego;
  std::vector<VehicleState> others;
};

/// Noise-free observation of a traffic state.
Observation observe_exact(const TrafficState& traffic);

/// Nearest main-road vehicle strictly ahead of position x.
std::optional<std::size_t> nearest_ahead(double x, std::span<const VehicleState> others);

/// Nearest main-road vehicle at or behind position x.
std::optional<std::size_t> nearest_behind(double x, std::span<const VehicleState> others);

VehicleAction driver_action(std::size_t index, const TrafficState& traffic,
                            const RoadGeometry& road, const DriverModelConfig& cfg = {});

}  // namespace lvt
