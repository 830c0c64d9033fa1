#include <gtest/gtest.h>

#include <cmath>

#include "holoflow/pathology.hpp"

using namespace holoflow;

TEST(Pathology, PsiConstant) {
  EXPECT_DOUBLE_EQ(psi_constant(1, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(psi_constant(2, 0.5), 1.5 * 2.5);
  EXPECT_DOUBLE_EQ(psi_constant(3, 1.0), 24.0);
}

TEST(Pathology, DiscWitnessStaysAboveThreshold) {
  const std::vector<double> k = {10, 100, 1000};
  DiscOptions opts;
  opts.points_per_axis = 801;
  const auto rows = disc_experiment(1, 0.5, k, opts);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.diffeomorphism);
    EXPECT_TRUE(r.pass);
    EXPECT_DOUBLE_EQ(r.threshold, 3.0);
    EXPECT_GE(r.seminorm, r.witness - 1e-12);
    EXPECT_NEAR(r.chart_norm, r.scaled_norm, 1e-9 * r.scaled_norm);
  }
}

TEST(Pathology, OptimalExponentMatchesClosedForm) {
  std::vector<double> s;
  for (int k = 4; k <= 10; ++k) s.push_back(std::ldexp(1.0, -k));
  const OptimalReport r = optimal_experiment(1, 0.9, 0.3, 0.7, s);
  EXPECT_LT(r.max_rel_error, 1e-10);
  EXPECT_NEAR(r.slope, -0.1, 1e-9);
  EXPECT_DOUBLE_EQ(r.expected_slope, 0.9 - 0.3 - 0.7);
  EXPECT_THROW(optimal_experiment(1, 0.9, 0.95, 0.7, s), std::invalid_argument);
}

TEST(Pathology, SeparabilityQuotients) {
  const std::vector<double> t = {0.0, 0.1, 0.2, 0.5};
  const SeparabilityReport r = separability_gap(2, 1.0, t);
  EXPECT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) EXPECT_TRUE(row.pass);
  EXPECT_GE(r.min_quotient, 2.0 * psi_constant(2, 1.0) - 1e-9);
  const std::vector<double> dup = {0.1, 0.1};
  EXPECT_THROW(separability_gap(1, 0.5, dup), std::invalid_argument);
}

TEST(Pathology, FamilyRejectsSteepCutoff) {
  EXPECT_THROW(PsiFamily(1, 0.5, Cutoff{1.0, 2.0}), std::invalid_argument);
  EXPECT_NO_THROW(PsiFamily(1, 0.5));
}
