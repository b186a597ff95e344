#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lvt/rng.hpp"
#include "lvt/stats.hpp"

using namespace lvt;

TEST(Stats, MeanStdSe) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(stats::mean(xs), 5.0);
  EXPECT_NEAR(stats::sample_std(xs), std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_NEAR(stats::standard_error(xs), std::sqrt(32.0 / 7.0) / std::sqrt(8.0), 1e-12);
  const std::vector<double> same(10, 3.3);
  EXPECT_EQ(stats::standard_error(same), 0.0);
  EXPECT_EQ(stats::sample_std(std::vector<double>{1.0}), 0.0);
}

TEST(Percentile, LinearInterpolation) {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  EXPECT_DOUBLE_EQ(stats::percentile(xs, 50), 50.5);
  EXPECT_DOUBLE_EQ(stats::percentile(xs, 0), 1.0);
  EXPECT_DOUBLE_EQ(stats::percentile(xs, 100), 100.0);
  EXPECT_NEAR(stats::percentile(xs, 10), 10.9, 1e-12);
  const std::vector<double> flat(7, 4.2);
  for (double p : {0.0, 33.0, 90.0}) EXPECT_DOUBLE_EQ(stats::percentile(flat, p), 4.2);
  // Unsorted input.
  EXPECT_DOUBLE_EQ(stats::percentile(std::vector<double>{3, 1, 2}, 50), 2.0);
}

TEST(Percentile, Errors) {
  EXPECT_THROW(stats::percentile(std::vector<double>{}, 50), std::invalid_argument);
  EXPECT_THROW(stats::percentile(std::vector<double>{1, 2}, 101), std::invalid_argument);
}

TEST(Spearman, PerfectAndExactSmallSample) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{10, 20, 25, 40, 100};
  const std::vector<double> down{5, 4, 3, 2, 1};
  const auto a = stats::spearman(x, up);
  EXPECT_DOUBLE_EQ(a.rho, 1.0);
  // Only the identity and reversal reach |rho| = 1 among 5! orderings.
  EXPECT_NEAR(a.p_value, 2.0 / 120.0, 1e-12);
  EXPECT_DOUBLE_EQ(stats::spearman(x, down).rho, -1.0);
}

TEST(Spearman, TiesUseAverageRanks) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 1, 2, 2};
  // Ranks of y: 1.5 1.5 3.5 3.5; Pearson on ranks.
  EXPECT_NEAR(stats::spearman(x, y).rho, 2.0 / std::sqrt(5.0), 1e-12);
}

TEST(Spearman, LargeSampleAgreesWithPermutationTest) {
  Rng rng(3);
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i);
    y.push_back(i + 25.0 * standard_normal(rng));
  }
  const auto c = stats::spearman(x, y);
  ASSERT_GT(c.p_value, 0.001);
  ASSERT_LT(c.p_value, 0.5);

  std::vector<double> shuffled = y;
  int extreme = 0;
  const int rounds = 20000;
  for (int r = 0; r < rounds; ++r) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (std::abs(stats::spearman(x, shuffled).rho) >= std::abs(c.rho) - 1e-12) ++extreme;
  }
  EXPECT_NEAR(c.p_value, static_cast<double>(extreme) / rounds, 0.02);
  EXPECT_LT(stats::spearman(x, x).p_value, 1e-6);
}

TEST(Spearman, LengthMismatchThrows) {
  EXPECT_THROW(stats::spearman(std::vector<double>{1, 2}, std::vector<double>{1}),
               std::invalid_argument);
}
