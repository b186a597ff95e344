#include "lvt/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lvt {

InternalState internal_from_hypothesis(const Hypothesis& h, const DriverModelConfig& cfg) {
  InternalState s = internal_from_aggressiveness(h.psi, cfg);
  s.w_m = h.attentive ? 1.0 : 0.0;
  return s;
}

std::vector<Hypothesis> BeliefConfig::grid() const {
  if (psi_points < 2) throw std::invalid_argument("BeliefConfig: psi_points must be >= 2");
  std::vector<Hypothesis> cells;
  cells.reserve(2 * static_cast<std::size_t>(psi_points));
  for (int i = 0; i < psi_points; ++i) {
    const double psi = static_cast<double>(i) / (psi_points - 1);
    cells.push_back({psi, true});
    cells.push_back({psi, false});
  }
  return cells;
}

std::vector<double> Belief::psi_marginal(std::size_t vehicle) const {
  const auto& p = posterior.at(vehicle);
  std::vector<double> m(p.size() / 2, 0.0);
  for (std::size_t c = 0; c < p.size(); ++c) m[c / 2] += p[c];
  return m;
}

std::size_t Belief::psi_mode(std::size_t vehicle) const {
  const auto m = psi_marginal(vehicle);
  return static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
}

double Belief::entropy(std::size_t vehicle) const {
  double h = 0.0;
  for (double q : posterior.at(vehicle)) {
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

std::vector<double> transition_log_likelihood(std::size_t index, const Observation& before,
                                              const Observation& after,
                                              std::span<const Hypothesis> grid,
                                              const BeliefConfig& cfg) {
  DriverModelConfig drivers = cfg.drivers;
  drivers.strict_gaps = false;

  const double v0 = before.others.at(index).vx;
  const double observed = (after.others.at(index).vx - v0) / cfg.dt;
  const double stop_floor = -v0 / cfg.dt;

  std::vector<double> ll(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const InternalState internal = internal_from_hypothesis(grid[c], drivers);
    const double predicted = std::max(
        driver_action(index, before.ego, before.others, internal, cfg.road, drivers).ax,
        stop_floor);
    const double z = (observed - predicted) / cfg.sigma_acc;
    ll[c] = -0.5 * z * z;
  }
  return ll;
}

std::optional<std::vector<double>> normalize_log_posterior(const std::vector<double>& log_sum) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : log_sum) {
    if (!std::isnan(v)) top = std::max(top, v);
  }
  if (!std::isfinite(top)) return std::nullopt;
  std::vector<double> p(log_sum.size());
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = std::isnan(log_sum[c]) ? 0.0 : std::exp(log_sum[c] - top);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

std::size_t draw_cell(const std::vector<double>& p, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    acc += p[c];
    if (u < acc) return c;
  }
  // Rounding left u above the cumulative total: take the last populated cell.
  for (std::size_t c = p.size(); c-- > 0;) {
    if (p[c] > 0.0) return c;
  }
  return p.size() - 1;
}

}  // namespace

GridBeliefModel::GridBeliefModel(BeliefConfig cfg) : cfg_(std::move(cfg)), grid_(cfg_.grid()) {
  if (!(cfg_.sigma_acc > 0.0) || cfg_.window < 1 || !(cfg_.dt > 0.0)) {
    throw std::invalid_argument("GridBeliefModel: invalid configuration");
  }
}

BeliefPtr GridBeliefModel::initial(const Observation& first) const {
  auto b = std::make_shared<Belief>();
  const std::size_t n = first.others.size();
  b->posterior.assign(n, uniform(grid_.size()));
  b->log_likelihoods.resize(n);
  b->last = first;
  return b;
}

BeliefPtr GridBeliefModel::update(const BeliefPtr& b, std::span<const Observation> history) const {
  if (history.empty()) return b;
  auto next = std::make_shared<Belief>(*b);
  const std::size_t n = next->vehicle_count();
  const std::size_t window = static_cast<std::size_t>(cfg_.window);

  for (const Observation& obs : history) {
    if (obs.others.size() != n) throw std::invalid_argument("belief update: vehicle set changed");
    if (next->last) {
      for (std::size_t v = 0; v < n; ++v) {
        auto& ring = next->log_likelihoods[v];
        ring.push_back(transition_log_likelihood(v, *next->last, obs, grid_, cfg_));
        if (ring.size() > window) ring.pop_front();
      }
    }
    next->last = obs;
  }

  next->fallback_used = false;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> sum(grid_.size(), 0.0);
    for (const auto& ll : next->log_likelihoods[v]) {
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += ll[c];
    }
    if (auto p = normalize_log_posterior(sum)) {
      next->posterior[v] = std::move(*p);
    } else {
      next->posterior[v] = uniform(grid_.size());
      next->fallback_used = true;
    }
  }
  return next;
}

std::vector<InternalState> GridBeliefModel::sample(const Belief& b, Rng& rng) const {
  std::vector<InternalState> out;
  out.reserve(b.vehicle_count());
  for (const auto& p : b.posterior) {
    out.push_back(internal_from_hypothesis(grid_[draw_cell(p, rng)], cfg_.drivers));
  }
  return out;
}

PriorBeliefModel::PriorBeliefModel(BeliefConfig cfg) : grid_model_(std::move(cfg)) {}

BeliefPtr PriorBeliefModel::initial(const Observation& first) const {
  return grid_model_.initial(first);
}

BeliefPtr PriorBeliefModel::update(const BeliefPtr& b, std::span<const Observation>) const {
  return b;
}

std::vector<InternalState> PriorBeliefModel::sample(const Belief& b, Rng& rng) const {
  return grid_model_.sample(b, rng);
}

FixedBeliefModel::FixedBeliefModel(std::vector<InternalState> internals)
    : internals_(std::move(internals)) {}

FixedBeliefModel::FixedBeliefModel(InternalState every_vehicle, std::size_t vehicle_count)
    : internals_(vehicle_count, every_vehicle) {}

BeliefPtr FixedBeliefModel::initial(const Observation& first) const {
  if (first.others.size() != internals_.size()) {
    throw std::invalid_argument("FixedBeliefModel: vehicle count mismatch");
  }
  auto b = std::make_shared<Belief>();
  b->posterior.assign(internals_.size(), std::vector<double>{1.0});
  b->log_likelihoods.resize(internals_.size());
  b->last = first;
  return b;
}

BeliefPtr FixedBeliefModel::update(const BeliefPtr& b, std::span<const Observation>) const {
  return b;
}

std::vector<InternalState> FixedBeliefModel::sample(const Belief&, Rng&) const {
  return internals_;
}

}  // namespace lvt
