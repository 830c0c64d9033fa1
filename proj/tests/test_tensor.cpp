#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "holoflow/tensor.hpp"

using namespace holoflow;

TEST(Tensor, IntPow) {
  EXPECT_EQ(int_pow(3, 0), 1u);
  EXPECT_EQ(int_pow(3, 4), 81u);
  EXPECT_EQ((TensorShape{2, 3, 2}).size(), 18u);
}

TEST(Tensor, SymmetrizeAveragesSlotsAndIsIdempotent) {
  const TensorShape shape{1, 2, 2};
  std::vector<double> t = {1.0, 2.0, 4.0, 5.0};
  symmetrize(t, shape);
  EXPECT_DOUBLE_EQ(t[1], 3.0);
  EXPECT_DOUBLE_EQ(t[2], 3.0);
  EXPECT_DOUBLE_EQ(t[0], 1.0);
  const auto copy = t;
  symmetrize(t, shape);
  EXPECT_EQ(t, copy);
}

TEST(Tensor, ContractAllSlotsWithIdentityIsNoOp) {
  const TensorShape shape{2, 2, 3};
  std::vector<double> t(shape.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.25 * static_cast<double>(i) - 1.0;
  const std::vector<double> id = {1.0, 0.0, 0.0, 1.0};
  EXPECT_EQ(contract_all_slots(t, shape, id), t);
}

TEST(Tensor, ContractAllSlotsScalesByDegree) {
  const TensorShape shape{1, 2, 3};
  std::vector<double> t(shape.size(), 1.0);
  const std::vector<double> twice = {2.0, 0.0, 0.0, 2.0};
  for (double v : contract_all_slots(t, shape, twice)) EXPECT_DOUBLE_EQ(v, 8.0);
}

TEST(Tensor, OpnormOfRankOneIsSpectralNorm) {
  // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5).
  const std::vector<double> a = {3.0, 0.0, 4.0, 5.0};
  const double n = tensor_opnorm({a, {2, 2, 1}});
  EXPECT_NEAR(n, std::sqrt(45.0), 1e-12);
}

TEST(Tensor, OpnormOfScalarsAndVectors) {
  const std::vector<double> v = {3.0, -4.0};
  EXPECT_DOUBLE_EQ(tensor_opnorm({v, {2, 1, 0}}), 5.0);
  const std::vector<double> tiny = {3e-200, 4e-200};
  EXPECT_NEAR(tensor_opnorm({tiny, {2, 1, 0}}), 5e-200, 1e-214);
}

TEST(Tensor, OpnormOfSymmetricBilinearFormIsLowerBoundedByDiagonal) {
  // T(u, v) = u_0 v_0 - u_1 v_1 has operator norm 1.
  const std::vector<double> t = {1.0, 0.0, 0.0, -1.0};
  EXPECT_NEAR(tensor_opnorm({t, {1, 2, 2}}), 1.0, 1e-12);
}

TEST(Tensor, ApplyTensorEvaluatesMultilinearForm) {
  const std::vector<double> t = {1.0, 2.0, 3.0, 4.0};  // T(u, v) = sum t_ij u_i v_j
  const std::vector<double> vs = {1.0, 0.0, 0.0, 1.0};
  std::vector<double> out(1);
  apply_tensor({t, {1, 2, 2}}, vs, out);
  EXPECT_DOUBLE_EQ(out[0], 2.0);
}
