#include "lvt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace lvt::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double standard_error(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("standard error of empty sample");
  return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double percentile(std::span<const double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("percentile of empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile outside [0, 100]");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double rank = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (rank - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

namespace {

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

Correlation spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: size mismatch");
  if (xs.size() < 3) throw std::invalid_argument("spearman: need at least 3 pairs");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);

  Correlation c;
  c.rho = pearson(rx, ry);
  const std::size_t n = xs.size();

  if (n <= 10) {
    std::vector<double> perm = ry;
    std::sort(perm.begin(), perm.end());
    std::size_t extreme = 0, total = 0;
    const double observed = std::abs(c.rho) - 1e-12;
    do {
      ++total;
      if (std::abs(pearson(rx, perm)) >= observed) ++extreme;
    } while (std::next_permutation(perm.begin(), perm.end()));
    c.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    return c;
  }

  if (std::abs(c.rho) >= 1.0) {
    c.p_value = 0.0;
    return c;
  }
  const double df = static_cast<double>(n - 2);
  const double t = c.rho * std::sqrt(df / (1.0 - c.rho * c.rho));
  const boost::math::students_t dist(df);
  c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return c;
}

}  // namespace lvt::stats
