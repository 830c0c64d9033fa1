#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "holoflow/fields.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/group.hpp"

using namespace holoflow;

TEST(Flow, ZeroFieldIsExactlyTheIdentity) {
  const std::vector<Point> seeds = {{-1.0}, {0.25}, {3.0}};
  const FlowTrajectory traj = integrate_flow(TimeField::zero(1, 2), seeds, 2, {64, 0, 1.0});
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Jet& j = traj.final_state()[i];
    const Jet id = identity_jet(seeds[i], 2);
    for (std::size_t e = 0; e < j.data().size(); ++e) EXPECT_EQ(j.data()[e], id.data()[e]);
  }
}

TEST(Flow, LinearFieldOnThePlateauIsExponential) {
  const TimeField u = TimeField::autonomous(linear_field(1, 2, 0.5));
  const Point x{0.1};
  const Jet j = flow_jet(u, x, 2, {256, 0, 1.0});
  EXPECT_NEAR(j.value()[0], 0.1 * std::exp(0.5), 1e-12);
  EXPECT_NEAR(j.block(1)[0], std::exp(0.5), 1e-11);
  EXPECT_NEAR(j.block(2)[0], 0.0, 1e-12);
}

TEST(Flow, ModulatedPlateauShiftHasClosedForm) {
  const TimeField u =
      TimeField::modulated(plateau_shift(1, 1, {0.3}), [](double t) { return 1.0 + t; }, "1+t");
  const Point x{-0.8};
  const Jet j = flow_jet(u, x, 1, {32, 0, 1.0});
  EXPECT_NEAR(j.value()[0], -0.8 + 0.3 * 1.5, 1e-14);
  EXPECT_NEAR(j.block(1)[0], 1.0, 1e-14);
}

TEST(Flow, ReversedFieldUndoesTheFlow) {
  const TimeField u = TimeField::modulated(gaussian_field(1, 1, 1, 0.5), [](double t) { return std::cos(3 * t); }, "cos");
  for (double x0 : {-1.0, 0.2, 1.5}) {
    const Point x{x0};
    const Jet forward = flow_jet(u, x, 1, {1024, 0, 1.0});
    const Point y(forward.value().begin(), forward.value().end());
    const Jet back = flow_jet(reversed(u), y, 1, {1024, 0, 1.0});
    EXPECT_NEAR(back.value()[0], x0, 1e-9);
    EXPECT_NEAR(back.block(1)[0] * forward.block(1)[0], 1.0, 1e-9);
  }
}

TEST(Flow, StepPlanAlignsWithBreakpoints) {
  const TimeField u = TimeField::piecewise({0.3}, {TimeField::zero(1, 1), TimeField::zero(1, 1)});
  const StepPlan plan = plan_steps(u, 10);
  ASSERT_EQ(plan.times.size(), 11u);
  EXPECT_EQ(plan.times[3], 0.3);
  EXPECT_EQ(plan.times.back(), 1.0);
  EXPECT_EQ(plan.piece[2], 0u);
  EXPECT_EQ(plan.piece[3], 1u);
  EXPECT_EQ(u.piece_of(0.29), 0u);
  EXPECT_EQ(u.piece_of(0.3), 1u);
  EXPECT_THROW(plan_steps(u, 0), std::invalid_argument);
}

TEST(Flow, SnapshotsIncludePieceBoundaries) {
  const JetEvaluator g = gaussian_field(1, 1, 1, 0.3);
  const TimeField u = TimeField::piecewise({0.5}, {TimeField::autonomous(g), TimeField::autonomous(scaled(g, -1.0))});
  const FlowTrajectory traj = integrate_flow(u, {{0.0}}, 1, {16, 0, 1.0});
  ASSERT_EQ(traj.times.size(), 3u);
  EXPECT_EQ(traj.times[1], 0.5);
  EXPECT_NEAR(traj.final_state()[0].value()[0], 0.0, 1e-10);
}

TEST(Flow, GronwallMarginsAreNonnegative) {
  const TimeField u = TimeField::autonomous(gaussian_field(2, 2, 1, 0.6, {0.2, 0.0}));
  std::vector<Point> seeds;
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {-1.0, 0.5}) seeds.push_back({a, b});
  const FlowTrajectory traj = integrate_flow(u, seeds, 1, {128, 16, 1.0});
  const GronwallReport r = gronwall_margins(traj, u);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.rows.size(), traj.times.size());
  for (const auto& row : r.rows) {
    EXPECT_GE(row.margin_a, 0.0);
    EXPECT_GE(row.margin_b, 0.0);
    EXPECT_LE(row.displacement, row.bound_a + 1e-12);
  }
}

TEST(Flow, TrajectoryCsvShape) {
  const TimeField u = TimeField::autonomous(gaussian_field(1, 1, 1, 0.2));
  const FlowTrajectory traj = integrate_flow(u, {{0.0}, {1.0}}, 1, {16, 4, 1.0});
  const GronwallReport r = gronwall_margins(traj, u);
  std::ostringstream os;
  write_trajectory_csv(os, traj, &r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,seed,x0,det_w1,margin_a,margin_b");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, traj.times.size() * 2);
}

TEST(Flow, LeastSquaresSlope) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 5, 7};
  EXPECT_DOUBLE_EQ(least_squares_slope(x, y), 2.0);
}

TEST(Flow, ExponentNeedsThreeDecreasingEps) {
  const TimeField u = TimeField::autonomous(gaussian_field(1, 1, 1, 0.3));
  const SampleGrid g(Box::cube(1, -4.0, 4.0), 41);
  const std::vector<double> eps = {0.5, 0.25};
  EXPECT_THROW(flowmap_exponent(u, u, eps, 1, 0.3, 0.9, 32, g), std::invalid_argument);
}

TEST(Flow, FlowDiffeoIsCertified) {
  const TimeField u = TimeField::autonomous(gaussian_field(1, 1, 2, 0.8));
  const DiffeoField phi = flow_diffeo(u, 2, {128, 0, 1.0});
  EXPECT_GT(phi.min_det(), 0.0);
}
