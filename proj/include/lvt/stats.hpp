#pragma once

#include <span>

namespace lvt::stats {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> xs);
/// sample_std / sqrt(n).
double standard_error(std::span<const double> xs);

/// Percentile with linear interpolation between closest ranks
/// (rank = p/100 * (n - 1)). Throws on empty input or p outside [0, 100].
double percentile(std::span<const double> xs, double p);

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided
};

/// Spearman rank correlation with average ranks for ties. The p-value is
/// exact (all permutations) for n <= 10, Student-t approximation above.
Correlation spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace lvt::stats
