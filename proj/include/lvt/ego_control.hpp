#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lvt/driver_model.hpp"
#include "lvt/kinematics.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

/// The agent's temporally extended policies. Ordinal order doubles as the
/// expansion and tie-breaking order in the planner.
enum class PolicyId : std::uint8_t {
  MergeIn = 0,
  GiveWay = 1,
  IncreaseSetpoint = 2,
  DecreaseSetpoint = 3,
  Maintain = 4,
};

inline constexpr std::array<PolicyId, 5> kAllPolicies = {
    PolicyId::MergeIn, PolicyId::GiveWay, PolicyId::IncreaseSetpoint,
    PolicyId::DecreaseSetpoint, PolicyId::Maintain};

std::string_view to_string(PolicyId id);
std::optional<PolicyId> policy_from_string(std::string_view name);

/// Small bitset over PolicyId.
class PolicySet {
 public:
  constexpr PolicySet() = default;

  void insert(PolicyId id) { bits_ |= mask(id); }
  bool contains(PolicyId id) const { return (bits_ & mask(id)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  /// i-th member in enumeration order.
  PolicyId nth(std::size_t i) const;

  friend bool operator==(PolicySet, PolicySet) = default;

 private:
  static constexpr std::uint8_t mask(PolicyId id) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(id));
  }
  std::uint8_t bits_ = 0;
};

struct EgoConfig {
  double dt = 0.1;
  double decision_period = 1.0;      // duration of setpoint/maintain policies [s]
  double psi_step = 0.3;             // ACC setpoint change per decision
  double merge_lateral_speed = 0.75; // [m/s]
  double max_accel = 6.0;            // agent actuator limits [m/s^2]
  double max_brake = 6.0;
  double lead_worst_brake = 9.0;     // braking assumed for the target in the safety check
  double safety_margin = 2.0;        // gap kept when both vehicles are stopped [m]
  double abort_progress = 0.5;       // merge may be abandoned below this lateral progress

  int decision_steps() const;
};

struct EgoControllerState {
  double psi_setpoint = 0.5;
  PolicyId active_policy = PolicyId::Maintain;
  int policy_steps = 0;
  std::optional<std::size_t> give_way_target;

  double policy_elapsed(double dt) const { return policy_steps * dt; }
};

/// Target the ACC regulates against. `gap` is bumper-to-bumper and may be
/// negative when the target is beside or behind the agent.
struct LeadTarget {
  double gap = 0.0;
  double speed = 0.0;
};

PolicySet available_policies(const VehicleState& ego, const EgoControllerState& ctrl,
                             const RoadGeometry& road);

/// Largest acceleration that keeps the worst-case stopping configuration at
/// least `safety_margin` apart, assuming the target brakes at
/// `lead_worst_brake` and the agent can brake at `max_brake` afterwards.
double max_safe_acceleration(double speed, const LeadTarget& target, const EgoConfig& cfg);

/// Adaptive cruise control: IDM with aggressiveness-derived parameters,
/// capped by max_safe_acceleration and by the actuator limits.
double acc_longitudinal(const VehicleState& ego, const std::optional<LeadTarget>& target,
                        double psi, const EgoConfig& cfg,
                        const DriverModelConfig& drivers = {});

/// The end of the ramp acts as a stationary obstacle until the agent has
/// crossed into the main lane.
std::optional<LeadTarget> ramp_end_target(const VehicleState& ego, const RoadGeometry& road);

/// Nearest main-road vehicle at or behind the agent's projection.
std::optional<std::size_t> select_give_way_target(const Observation& obs);

EgoControllerState apply_setpoint_delta(const EgoControllerState& ctrl, int direction,
                                        double step = 0.3);

/// Activation bookkeeping: resets the step counter, applies the setpoint
/// change of Increase/Decrease and picks the give-way target.
EgoControllerState start_policy(PolicyId policy, const EgoControllerState& ctrl,
                                const Observation& obs, const EgoConfig& cfg);

VehicleAction policy_action(PolicyId policy, const Observation& obs,
                            const EgoControllerState& ctrl, const RoadGeometry& road,
                            const EgoConfig& cfg, const DriverModelConfig& drivers = {});

bool policy_terminated(PolicyId policy, const Observation& obs,
                       const EgoControllerState& ctrl, const RoadGeometry& road,
                       const EgoConfig& cfg);

}  // namespace lvt
