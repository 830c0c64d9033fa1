#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>

#include "holoflow/jets.hpp"
#include "support.hpp"

using namespace holoflow;

namespace {

// Set partitions of {1..k} by restricted growth strings.
long brute_force_bell(int k) {
  long count = 0;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int i, int max_block) {
    if (i == k) {
      ++count;
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      a[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(max_block, b));
    }
  };
  if (k == 0) return 1;
  a[0] = 0;
  rec(1, 0);
  return count;
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Compositions, CountsAreBinomial) {
  for (int k = 1; k <= kMaxOrder; ++k) {
    for (int l = 1; l <= k; ++l) {
      EXPECT_EQ(static_cast<long>(compositions(l, k).size()), binomial(k - 1, l - 1)) << "l=" << l << " k=" << k;
    }
  }
}

TEST(Compositions, LexicographicOrder) {
  const auto c = enumerate_compositions(2, 4);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].parts, (std::vector<int>{1, 3}));
  EXPECT_EQ(c[1].parts, (std::vector<int>{2, 2}));
  EXPECT_EQ(c[2].parts, (std::vector<int>{3, 1}));
  EXPECT_THROW(enumerate_compositions(0, 3), std::invalid_argument);
  EXPECT_THROW(enumerate_compositions(4, 3), std::invalid_argument);
}

TEST(Compositions, CoefficientsSumToBellNumbers) {
  for (int k = 1; k <= kMaxOrder; ++k) {
    double total = 0.0;
    for (int l = 1; l <= k; ++l) {
      for (const auto& g : compositions(l, k)) total += faa_coefficient(g).value();
    }
    EXPECT_DOUBLE_EQ(total, static_cast<double>(brute_force_bell(k))) << "k=" << k;
  }
}

TEST(Compositions, CoefficientIsReduced) {
  const Rational r = faa_coefficient({{1, 2}});  // 3! / (2! 1! 2!) = 3/2
  EXPECT_EQ(r.num, 3);
  EXPECT_EQ(r.den, 2);
}

TEST(JetCompose, AllOnesGivesBellNumbers) {
  // g^{(l)} = 1 and f^{(j)} = 1: d^k (g o f) is the number of set partitions.
  const int n = kMaxOrder;
  const std::vector<double> ones(static_cast<std::size_t>(n) + 1, 1.0);
  const Jet h = jet_compose(scalar_jet(ones), scalar_jet(ones), n);
  for (int k = 1; k <= n; ++k) EXPECT_DOUBLE_EQ(h.block(k)[0], static_cast<double>(brute_force_bell(k)));
}

TEST(JetCompose, ExpOfSineMatchesOracle) {
  using namespace oracle;
  const ExprPtr inner = holoflow::oracle::sin(var(0));
  const ExprPtr outer = holoflow::oracle::exp(var(0));
  const std::vector<double> x = {0.3};
  const Jet f = test::oracle_jet({inner}, 1, 6, x);
  const Jet g = test::oracle_jet({outer}, 1, 6, f.value());
  const Jet ref = test::oracle_jet({substitute(outer, {inner})}, 1, 6, x);
  EXPECT_LT(test::rel_diff(jet_compose(g, f, 6), ref), 1e-13);
}

TEST(JetCompose, RandomMultivariateCompositionsMatchOracle) {
  oracle::ExprGenerator gen(42);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 2;
    const int m = 1 + (trial / 2) % 2;
    const int order = 1 + trial % 4;
    std::vector<oracle::ExprPtr> f, g;
    for (int i = 0; i < m; ++i) f.push_back(gen.generate(d, 2));
    g.push_back(gen.generate(m, 2));
    g.push_back(gen.generate(m, 1));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& xi : x) xi = gen.unit();
    const Jet fj = test::oracle_jet(f, d, order, x);
    const Jet gj = test::oracle_jet(g, m, order, fj.value());
    std::vector<oracle::ExprPtr> composed;
    for (const auto& gi : g) composed.push_back(oracle::substitute(gi, f));
    const Jet ref = test::oracle_jet(composed, d, order, x);
    EXPECT_LT(test::rel_diff(jet_compose(gj, fj, order), ref), 1e-10) << "trial " << trial;
  }
}

TEST(JetCompose, OutputBlocksAreSymmetric) {
  oracle::ExprGenerator gen(7);
  const std::vector<oracle::ExprPtr> f = {gen.generate(2, 2), gen.generate(2, 2)};
  const std::vector<oracle::ExprPtr> g = {gen.generate(2, 2)};
  const std::vector<double> x = {0.2, -0.4};
  const Jet fj = test::oracle_jet(f, 2, 3, x);
  const Jet h = jet_compose(test::oracle_jet(g, 2, 3, fj.value()), fj, 3);
  const auto b = h.block(2);
  EXPECT_EQ(b[1], b[2]);
  const auto c = h.block(3);
  EXPECT_EQ(c[1], c[2]);
  EXPECT_EQ(c[1], c[4]);
  EXPECT_EQ(c[3], c[5]);
  EXPECT_EQ(c[3], c[6]);
}

TEST(JetCompose, FaaTermsNeedEnoughOuterOrder) {
  const Jet f = identity_jet(std::vector<double>{0.0}, 3);
  const Jet g(1, 1, 1);
  EXPECT_THROW(faa_di_bruno_terms(g, f, 3, 1, 3), std::invalid_argument);
}

TEST(JetBilinear, ProductRuleMatchesOracle) {
  oracle::ExprGenerator gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2;
    const int order = 1 + trial % 4;
    const auto a = gen.generate(d, 2);
    const auto b = gen.generate(d, 2);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& xi : x) xi = gen.unit();
    const Jet p = jet_bilinear(BilinearMap::scalar_product(), test::oracle_jet({a}, d, order, x),
                               test::oracle_jet({b}, d, order, x), order);
    EXPECT_LT(test::rel_diff(p, test::oracle_jet({oracle::mul(a, b)}, d, order, x)), 1e-12) << "trial " << trial;
  }
}

TEST(JetBilinear, MatrixVector) {
  // A(x) = [[x, 0], [0, 1]], v(x) = (1, x): A v = (x, x).
  const std::vector<double> x = {2.0};
  Jet a(1, 4, 1), v(1, 2, 1);
  a.value()[0] = 2.0;
  a.value()[3] = 1.0;
  a.block(1)[0] = 1.0;
  v.value()[0] = 1.0;
  v.value()[1] = 2.0;
  v.block(1)[1] = 1.0;
  const Jet av = jet_bilinear(BilinearMap::matrix_vector(2), a, v, 1);
  EXPECT_DOUBLE_EQ(av.value()[0], 2.0);
  EXPECT_DOUBLE_EQ(av.value()[1], 2.0);
  EXPECT_DOUBLE_EQ(av.block(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(av.block(1)[1], 1.0);
}

TEST(JetArithmetic, AxpyAndTruncate) {
  const std::vector<double> x = {1.0, 2.0};
  Jet a = identity_jet(x, 2);
  a.axpy(2.0, identity_jet(x, 2));
  EXPECT_DOUBLE_EQ(a.value()[1], 6.0);
  EXPECT_DOUBLE_EQ(a.block(1)[0], 3.0);
  const Jet t = a.truncated(1);
  EXPECT_EQ(t.order(), 1);
  EXPECT_EQ(t.data().size(), 2u + 4u);
  EXPECT_TRUE(t.all_finite());
}
