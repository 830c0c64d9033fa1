#include <gtest/gtest.h>

#include <cmath>

#include "holoflow/oracle/symbolic.hpp"

using namespace holoflow::oracle;

TEST(Oracle, KnownDerivatives) {
  // f = x0^3 * sin(x1)
  const ExprPtr f = mul(powi(var(0), 3), sin(var(1)));
  Partials p(f);
  const std::vector<double> x = {0.7, 0.3};
  EXPECT_NEAR(eval(p.get({0}), x), 3 * 0.49 * std::sin(0.3), 1e-15);
  EXPECT_NEAR(eval(p.get({0, 1}), x), 3 * 0.49 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(eval(p.get({1, 0}), x), 3 * 0.49 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(eval(p.get({0, 0, 0}), x), 6 * std::sin(0.3), 1e-14);
  EXPECT_NEAR(eval(p.get({0, 0, 0, 0}), x), 0.0, 0.0);
}

TEST(Oracle, SimplificationKeepsTreesSmall) {
  EXPECT_TRUE(is_const(diff(constant(3.0), 0), 0.0));
  EXPECT_EQ(add(constant(0.0), var(1))->op, Op::var);
  EXPECT_EQ(mul(constant(1.0), var(1))->op, Op::var);
  EXPECT_TRUE(is_const(mul(var(0), constant(0.0)), 0.0));
}

TEST(Oracle, AgreesWithFiniteDifferences) {
  ExprGenerator gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ExprPtr e = gen.generate(2, 3);
    const std::vector<double> x = {gen.unit(), gen.unit()};
    for (int i = 0; i < 2; ++i) {
      const double fd = five_point_difference([&](const std::vector<double>& y) { return eval(e, y); }, x, i, 1e-3);
      const double exact = eval(diff(e, i), x);
      EXPECT_NEAR(fd, exact, 1e-7 * std::max(1.0, std::abs(exact))) << to_string(e);
    }
  }
}

TEST(Oracle, SubstituteComposes) {
  const ExprPtr g = mul(var(0), var(1));
  const ExprPtr e = substitute(g, {sin(var(0)), cos(var(0))});
  const std::vector<double> x = {0.4};
  EXPECT_NEAR(eval(e, x), std::sin(0.4) * std::cos(0.4), 1e-16);
  EXPECT_NEAR(eval(diff(e, 0), x), std::cos(0.8), 1e-15);
}

TEST(Oracle, TensorLayoutHasLastIndexFastest) {
  const ExprPtr f = mul(var(0), powi(var(1), 2));  // f_01 = 2 x1, f_11 = 2 x0
  Partials p(f);
  const std::vector<double> x = {3.0, 5.0};
  const auto t = p.tensor(2, 2, x);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_DOUBLE_EQ(t[0], 0.0);
  EXPECT_DOUBLE_EQ(t[1], 10.0);
  EXPECT_DOUBLE_EQ(t[2], 10.0);
  EXPECT_DOUBLE_EQ(t[3], 6.0);
}
