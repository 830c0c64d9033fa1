#include <gtest/gtest.h>

#include <cmath>

#include "holoflow/fields.hpp"
#include "holoflow/pathology.hpp"

using namespace holoflow;

namespace {

double at(const JetEvaluator& f, double x, int level) {
  const Point p{x};
  return f(p, level).block(level)[0];
}

}  // namespace

TEST(SmoothStep, EndpointsAndMidpoint) {
  EXPECT_DOUBLE_EQ(smooth_step_jet(-1.0, 0).value()[0], 0.0);
  EXPECT_DOUBLE_EQ(smooth_step_jet(0.0, 0).value()[0], 0.0);
  EXPECT_DOUBLE_EQ(smooth_step_jet(1.0, 0).value()[0], 1.0);
  EXPECT_NEAR(smooth_step_jet(0.5, 0).value()[0], 0.5, 1e-15);
  EXPECT_NEAR(smooth_step_jet(0.5, 1).block(1)[0], 2.0, 1e-12);
  // Flat to all orders at the ends.
  EXPECT_EQ(smooth_step_jet(1e-4, 3).block(3)[0], 0.0);
}

TEST(SmoothStep, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (double s : {0.2, 0.45, 0.8}) {
    const Jet j = smooth_step_jet(s, 3);
    for (int k = 1; k <= 3; ++k) {
      const double fd = (smooth_step_jet(s + h, k - 1).block(k - 1)[0] - smooth_step_jet(s - h, k - 1).block(k - 1)[0]) / (2 * h);
      EXPECT_NEAR(j.block(k)[0], fd, 1e-6 * std::max(1.0, std::abs(fd))) << "s=" << s << " k=" << k;
    }
  }
}

TEST(Cutoff, PlateauSupportAndSlope) {
  const Cutoff c = Cutoff::standard();
  EXPECT_DOUBLE_EQ(c.jet(0.0, 0).value()[0], 1.0);
  EXPECT_DOUBLE_EQ(c.jet(-1.0, 0).value()[0], 1.0);
  EXPECT_DOUBLE_EQ(c.jet(4.0, 0).value()[0], 0.0);
  double slope = 0.0;
  for (int i = 0; i <= 3000; ++i) slope = std::max(slope, std::abs(c.jet(1.0 + i * 1e-3, 1).block(1)[0]));
  EXPECT_LE(slope, c.max_slope() + 1e-12);
  EXPECT_LT(slope, 1.0);
}

TEST(Cutoff, LogScaleKeepsLinearFieldContracting) {
  const JetEvaluator f = linear_field(1, 1, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) worst = std::max(worst, std::abs(at(f, -10.0 + i * 1e-3, 1)));
  EXPECT_LE(worst, 1.0 + 1e-12);
  EXPECT_DOUBLE_EQ(at(f, 0.5, 0), 0.5);
}

TEST(Gaussian, ValueBoundAndCenter) {
  const JetEvaluator g = gaussian_field(1, 1, 2, 0.3, {0.5}, 0.8);
  EXPECT_DOUBLE_EQ(at(g, 0.5, 0), 0.3);
  EXPECT_NEAR(at(g, 0.5, 2), -0.3 * 2.0 / 0.64, 1e-14);
  ASSERT_TRUE(g.value_bound());
  EXPECT_DOUBLE_EQ(*g.value_bound(), 0.3);
  EXPECT_DOUBLE_EQ(at(g, 0.5 + 6 * 0.8 + 1e-9, 0), 0.0);
}

TEST(Psi, NthDerivativeOnPlateauIsClosedForm) {
  for (int n : {1, 2, 3}) {
    for (double beta : {0.5, 0.9, 1.0}) {
      const JetEvaluator psi = psi_field(n, beta);
      const double c = psi_constant(n, beta);
      for (double x : {-0.9, -0.3, 0.2, 0.7}) {
        EXPECT_NEAR(at(psi, x, n), c * std::pow(std::abs(x), beta), 1e-12) << n << " " << beta << " " << x;
      }
      EXPECT_EQ(at(psi, 0.0, n), 0.0);
    }
  }
}

TEST(Psi, LowerDerivativesMatchFiniteDifferences) {
  const JetEvaluator psi = psi_field(2, 0.5);
  const double h = 1e-6;
  for (double x : {-2.5, -0.4, 0.3, 1.7}) {
    const double fd = (at(psi, x + h, 0) - at(psi, x - h, 0)) / (2 * h);
    EXPECT_NEAR(at(psi, x, 1), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Psi, ConstantIsProduct) {
  EXPECT_DOUBLE_EQ(psi_constant(1, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(psi_constant(2, 0.5), 3.75);
  EXPECT_DOUBLE_EQ(psi_constant(2, 1.0), 6.0);
}

TEST(PlateauShift, ConstantOnPlateau) {
  const JetEvaluator s = plateau_shift(2, 1, {0.3, -0.1});
  const Point x{0.5, -0.5};
  const Jet j = s(x, 1);
  EXPECT_DOUBLE_EQ(j.value()[0], 0.3);
  EXPECT_DOUBLE_EQ(j.value()[1], -0.1);
  for (double v : j.block(1)) EXPECT_EQ(v, 0.0);
}

TEST(FieldAlgebra, SumScaleTranslateAndLeftTranslate) {
  const JetEvaluator g = gaussian_field(1, 1, 2, 1.0);
  const JetEvaluator two = sum(g, g);
  EXPECT_DOUBLE_EQ(at(two, 0.3, 1), 2.0 * at(g, 0.3, 1));
  EXPECT_DOUBLE_EQ(at(scaled(g, -0.5), 0.3, 2), -0.5 * at(g, 0.3, 2));
  const std::vector<double> shift = {0.25};
  EXPECT_DOUBLE_EQ(at(translated(g, shift), 0.55, 0), at(g, 0.3, 0));
  // g o (Id + c) with c constant near 0 is a translate.
  const JetEvaluator c = plateau_shift(1, 2, {0.2});
  EXPECT_NEAR(at(left_translate(g, c), 0.1, 1), at(g, 0.3, 1), 1e-15);
  EXPECT_EQ(at(g, 100.0, 0), 0.0);
  EXPECT_THROW(g(Point{0.0, 0.0}, 0), std::invalid_argument);
  EXPECT_THROW(g(Point{0.0}, 3), std::invalid_argument);
}
