#include "lvt/traffic.hpp"

namespace lvt {

Observation observe_exact(const TrafficState& traffic) {
  return Observation{traffic.step, traffic.ego, traffic.others};
}

std::optional<std::size_t> nearest_ahead(double x, std::span<const VehicleState> others) {
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (others[j].x <= x) continue;
    if (!best || others[j].x < others[*best].x) best = j;
  }
  return best;
}

std::optional<std::size_t> nearest_behind(double x, std::span<const VehicleState> others) {
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (others[j].x > x) continue;
    if (!best || others[j].x > others[*best].x) best = j;
  }
  return best;
}

VehicleAction driver_action(std::size_t index, const TrafficState& traffic,
                            const RoadGeometry& road, const DriverModelConfig& cfg) {
  return driver_action(index, traffic.ego, traffic.others, traffic.internals.at(index),
                       road, cfg);
}

}  // namespace lvt
