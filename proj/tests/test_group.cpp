#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holoflow/error.hpp"
#include "holoflow/fields.hpp"
#include "holoflow/group.hpp"
#include "support.hpp"

using namespace holoflow;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const NumericalError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a NumericalError";
  return ErrorCode::numerical_blowup;
}

}  // namespace

TEST(Group, JacobianDeterminant) {
  const std::vector<double> a = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(jacobian_det(a, 2), -2.0);
  const std::vector<double> b = {2, 0, 0, 0, 3, 0, 1, 0, 4};
  EXPECT_DOUBLE_EQ(jacobian_det(b, 3), 24.0);
}

TEST(Group, OrientationReversingChartIsRejected) {
  const JetEvaluator phi = linear_field(1, 1, -2.0);
  const SampleGrid g = SampleGrid::over(phi.support());
  EXPECT_EQ(code_of([&] { orientation_check(phi, g); }), ErrorCode::not_a_diffeomorphism);
  EXPECT_EQ(code_of([&] { DiffeoField::certify(phi); }), ErrorCode::not_a_diffeomorphism);
  EXPECT_EQ(code_of([&] { DiffeoField::certified(phi, 0.0); }), ErrorCode::not_a_diffeomorphism);
}

TEST(Group, PlateauShiftsComposeByAddition) {
  const DiffeoField a = DiffeoField::certify(plateau_shift(1, 2, {0.2}));
  const DiffeoField b = DiffeoField::certify(plateau_shift(1, 2, {0.3}));
  const Point x{0.1};
  const Jet j = compose(a, b).phi()(x, 2);
  EXPECT_NEAR(j.value()[0], 0.5, 1e-15);
  EXPECT_EQ(j.block(1)[0], 0.0);
  EXPECT_EQ(j.block(2)[0], 0.0);
  EXPECT_NEAR(compose(a, b).apply(x)[0], 0.6, 1e-15);
}

TEST(Group, InverseOfPlateauShift) {
  const DiffeoField s = DiffeoField::certify(plateau_shift(1, 2, {0.2}));
  const Point x{0.0};
  const Jet j = invert(s).phi()(x, 2);
  EXPECT_NEAR(j.value()[0], -0.2, 1e-12);
  EXPECT_NEAR(j.block(1)[0], 0.0, 1e-12);
}

TEST(Group, InverseJetOfScalarMap) {
  // Phi(y) = y + y^2 / 2 at y = 1: Phi' = 2, Phi'' = 1, Phi''' = 0.
  const std::vector<double> d = {1.5, 2.0, 1.0, 0.0};
  const Point y{1.0};
  const Jet inv = inverse_jet(scalar_jet(d), y);
  EXPECT_DOUBLE_EQ(inv.value()[0], 1.0);
  EXPECT_DOUBLE_EQ(inv.block(1)[0], 0.5);
  EXPECT_DOUBLE_EQ(inv.block(2)[0], -1.0 / 8.0);
  // (Phi^{-1})''' = 3 Phi''^2 / Phi'^5 - Phi''' / Phi'^4
  EXPECT_DOUBLE_EQ(inv.block(3)[0], 3.0 / 32.0);
}

TEST(Group, NewtonPreimageSolvesTheChartEquation) {
  const JetEvaluator phi = gaussian_field(2, 2, 1, 0.3, {0.1, -0.2}, 0.8);
  const Point x{0.4, -0.3};
  const Point y = newton_preimage(phi, x);
  const Jet j = phi(y, 0);
  EXPECT_NEAR(y[0] + j.value()[0], x[0], 1e-12);
  EXPECT_NEAR(y[1] + j.value()[1], x[1], 1e-12);
}

TEST(Group, InverseComposesToIdentity) {
  for (int order = 1; order <= 3; ++order) {
    const DiffeoField phi = DiffeoField::certify(bump_mixture(1, 1, order, {{0.1, {0.3}, 0.6}, {-0.08, {-0.5}, 0.9}}));
    const DiffeoField id = compose(phi, invert(phi));
    for (double x : {-2.0, -0.4, 0.0, 0.7, 1.9}) {
      const Point p{x};
      const Jet j = id.phi()(p, order);
      for (double v : j.data()) EXPECT_NEAR(v, 0.0, 1e-9) << "order " << order << " x " << x;
    }
  }
}

TEST(Group, InverseInTwoDimensions) {
  const DiffeoField phi = DiffeoField::certify(gaussian_field(2, 2, 2, 0.1, {0.2, 0.1}, 0.7));
  const DiffeoField id = compose(invert(phi), phi);
  const Point p{0.3, -0.1};
  const Jet j = id.phi()(p, 2);
  for (double v : j.data()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Group, IdentityHasZeroChart) {
  const DiffeoField id = DiffeoField::identity(2, 2);
  const Point p{0.5, 0.5};
  const Jet j = id.phi()(p, 2);
  for (double v : j.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(id.apply(p), p);
}

TEST(Group, InverseMatrixBound) {
  const std::vector<double> id = {1, 0, 0, 1};
  const MatrixBoundReport r = inverse_matrix_bound(id, 2);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-12);
  EXPECT_TRUE(r.pass);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(9);
    for (double& v : a) v = u(rng);
    const MatrixBoundReport q = inverse_matrix_bound(a, 3);
    EXPECT_TRUE(q.pass) << q.lhs << " > " << q.rhs;
  }
}

TEST(Group, CompositionBoundHoldsForBumps) {
  const JetEvaluator f = gaussian_field(1, 1, 1, 0.4, {0.2}, 0.8);
  const JetEvaluator g = gaussian_field(1, 1, 1, 0.9, {-0.3}, 0.5);
  const SampleGrid grid(Box::cube(1, -10.0, 10.0), 401);
  const CompositionBoundReport r = composition_bound(f, g, 0.5, grid);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_LE(r.lhs, r.rhs);
}

TEST(Group, ComposeRejectsMismatchedOrders) {
  const DiffeoField a = DiffeoField::identity(1, 1);
  const DiffeoField b = DiffeoField::identity(1, 2);
  EXPECT_THROW(compose(a, b), std::invalid_argument);
}
