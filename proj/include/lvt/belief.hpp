#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lvt/driver_model.hpp"
#include "lvt/kinematics.hpp"
#include "lvt/rng.hpp"
#include "lvt/traffic.hpp"

namespace lvt {

/// One cell of the hidden-state grid: an aggressiveness level and whether
/// the driver reacts to the merging agent at all.
struct Hypothesis {
  double psi = 0.5;
  bool attentive = true;
};

/// Attentive drivers weigh the merge term fully, inattentive ones ignore it.
InternalState internal_from_hypothesis(const Hypothesis& h, const DriverModelConfig& cfg);

struct BeliefConfig {
  int psi_points = 11;      // psi grid {0, 1/(n-1), ..., 1}
  double sigma_acc = 0.3;   // acceleration likelihood tolerance [m/s^2]
  int window = 50;          // transitions kept per vehicle
  double dt = 0.1;
  RoadGeometry road;
  DriverModelConfig drivers;

  /// Cells ordered psi-major: index = 2 * psi_index + (attentive ? 0 : 1).
  std::vector<Hypothesis> grid() const;
};

/// Immutable per-vehicle posterior over the hypothesis grid together with
/// the recent per-transition log-likelihoods that produced it.
struct Belief {
  std::vector<std::vector<double>> posterior;
  std::vector<std::deque<std::vector<double>>> log_likelihoods;
  std::optional<Observation> last;
  bool fallback_used = false;  // a posterior degenerated and was reset to uniform

  std::size_t vehicle_count() const { return posterior.size(); }
  /// Marginal posterior over the psi grid for one vehicle.
  std::vector<double> psi_marginal(std::size_t vehicle) const;
  std::size_t psi_mode(std::size_t vehicle) const;
  double entropy(std::size_t vehicle) const;
};

using BeliefPtr = std::shared_ptr<const Belief>;

/// Log-likelihood vector (one entry per grid cell, up to a shared constant)
/// of vehicle `index` moving from `before` to `after`.
std::vector<double> transition_log_likelihood(std::size_t index, const Observation& before,
                                              const Observation& after,
                                              std::span<const Hypothesis> grid,
                                              const BeliefConfig& cfg);

/// Pluggable hidden-state estimator.
class BeliefModel {
 public:
  virtual ~BeliefModel() = default;

  virtual BeliefPtr initial(const Observation& first) const = 0;
  /// Incorporates observations that follow `b->last`, oldest first. An empty
  /// history returns `b` unchanged.
  virtual BeliefPtr update(const BeliefPtr& b, std::span<const Observation> history) const = 0;
  /// One hidden assignment per main-road vehicle.
  virtual std::vector<InternalState> sample(const Belief& b, Rng& rng) const = 0;
  /// Whether update() can change the belief. Planners skip the call otherwise.
  virtual bool learns() const = 0;
};

/// Exact Bayes filter over the (psi x attentive) grid with a uniform prior.
class GridBeliefModel final : public BeliefModel {
 public:
  explicit GridBeliefModel(BeliefConfig cfg = {});

  BeliefPtr initial(const Observation& first) const override;
  BeliefPtr update(const BeliefPtr& b, std::span<const Observation> history) const override;
  std::vector<InternalState> sample(const Belief& b, Rng& rng) const override;
  bool learns() const override { return true; }

  const BeliefConfig& config() const { return cfg_; }
  std::span<const Hypothesis> grid() const { return grid_; }

 private:
  BeliefConfig cfg_;
  std::vector<Hypothesis> grid_;
};

/// Uniform grid prior that is never updated.
class PriorBeliefModel final : public BeliefModel {
 public:
  explicit PriorBeliefModel(BeliefConfig cfg = {});

  BeliefPtr initial(const Observation& first) const override;
  BeliefPtr update(const BeliefPtr& b, std::span<const Observation> history) const override;
  std::vector<InternalState> sample(const Belief& b, Rng& rng) const override;
  bool learns() const override { return false; }

 private:
  GridBeliefModel grid_model_;
};

/// Point mass on a given hidden assignment; the same InternalState for every
/// vehicle when constructed from a single value.
class FixedBeliefModel final : public BeliefModel {
 public:
  explicit FixedBeliefModel(std::vector<InternalState> internals);
  FixedBeliefModel(InternalState every_vehicle, std::size_t vehicle_count);

  BeliefPtr initial(const Observation& first) const override;
  BeliefPtr update(const BeliefPtr& b, std::span<const Observation> history) const override;
  std::vector<InternalState> sample(const Belief& b, Rng& rng) const override;
  bool learns() const override { return false; }

 private:
  std::vector<InternalState> internals_;
};

/// Posterior of one vehicle from a sum of log-likelihood vectors (softmax
/// with a uniform prior). Returns nullopt if every cell is impossible.
std::optional<std::vector<double>> normalize_log_posterior(const std::vector<double>& log_sum);

}  // namespace lvt
