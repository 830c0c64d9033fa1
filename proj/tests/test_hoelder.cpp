#include <gtest/gtest.h>

#include <cmath>

#include "holoflow/fields.hpp"
#include "holoflow/hoelder.hpp"

using namespace holoflow;

namespace {

JetEvaluator abs_field() {
  return JetEvaluator(1, 1, 0, Box::cube(1, -10.0, 10.0), "abs", [](std::span<const double> x, int ord) {
    Jet j(1, 1, ord);
    j.value()[0] = std::abs(x[0]);
    return j;
  });
}

}  // namespace

TEST(SampleGrid, LatticeLayoutAndId) {
  const SampleGrid g(Box::cube(2, 0.0, 1.0), 3, {{{0.1, 0.1}, {0.2, 0.2}}});
  EXPECT_EQ(g.lattice_size(), 9u);
  ASSERT_EQ(g.points().size(), 11u);
  EXPECT_EQ(g.points()[1], (Point{0.0, 0.5}));  // last axis fastest
  EXPECT_EQ(g.points()[9], (Point{0.1, 0.1}));
  EXPECT_EQ(g.id(), "box=[0:1]x[0:1];ppa=3;pairs=1");
  EXPECT_THROW(SampleGrid(Box::cube(1, 0.0, 1.0), 3, {{{0.5}, {0.5}}}), std::invalid_argument);
  EXPECT_EQ(SampleGrid::default_points_per_axis(1), 4001);
  EXPECT_EQ(SampleGrid::default_points_per_axis(3), 41);
}

TEST(SelectPairs, MandatoryThenNeighboursThenCoarse) {
  const SampleGrid g(Box::cube(1, 0.0, 1.0), 5, {{{0.3}, {0.7}}});
  const auto pairs = select_pairs(g, kDefaultPairBudget);
  ASSERT_EQ(pairs.size(), 1u + 4u + 10u);
  EXPECT_EQ(pairs[0], (std::pair<std::size_t, std::size_t>{5, 6}));
  EXPECT_EQ(pairs[1], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(pairs[5], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(select_pairs(g, 3).size(), 3u);
  EXPECT_THROW(select_pairs(g, 0), std::invalid_argument);
}

TEST(Norms, SupNormWitnessIsLexicographicallySmallest) {
  const SampleGrid g(Box::cube(1, -1.0, 1.0), 5);
  const NormEstimate e = sup_norm(abs_field(), 0, g);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_EQ(e.witness, (Point{-1.0}));
  EXPECT_EQ(e.kind, NormKind::sup_level);
  EXPECT_EQ(e.grid_id, g.id());
}

TEST(Norms, SeminormWitnessPairAndTieBreak) {
  const SampleGrid g(Box::cube(1, -1.0, 1.0), 5);
  const NormEstimate e = hoelder_seminorm(abs_field(), 0, 0.5, g);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_EQ(e.witness, (Point{-1.0}));
  ASSERT_TRUE(e.witness_other);
  EXPECT_EQ(*e.witness_other, (Point{0.0}));
}

TEST(Norms, MandatoryPairsOnlyRaiseTheEstimate) {
  const JetEvaluator f = psi_field(1, 0.5);
  const SampleGrid g(Box::cube(1, -4.0, 4.0), 81);
  const double base = hoelder_seminorm(f, 1, 0.5, g).value;
  const double refined = hoelder_seminorm(f, 1, 0.5, g.with_pairs({{{0.0}, {1e-4}}})).value;
  EXPECT_GE(refined, base);
  EXPECT_GE(refined, 1.5 - 1e-12);  // psi' = 1.5 |x|^0.5 on the plateau
}

TEST(Norms, FullNormIsMaxOfComponents) {
  const JetEvaluator f = gaussian_field(1, 1, 2, 0.7);
  const SampleGrid g(Box::cube(1, -6.0, 6.0), 401);
  const JetSamples s = JetSamples::evaluate(f, g, 2);
  double m = hoelder_seminorm(s, 2, 0.3).value;
  for (int l = 0; l <= 2; ++l) m = std::max(m, sup_norm(s, l).value);
  EXPECT_DOUBLE_EQ(hoelder_norm(s, 2, 0.3).value, m);
  EXPECT_DOUBLE_EQ(ck_norm(s, 2).value, std::max({sup_norm(s, 0).value, sup_norm(s, 1).value, sup_norm(s, 2).value}));
}

TEST(Norms, ExactHomogeneityForPowerOfTwoScaling) {
  const JetEvaluator f = gaussian_field(2, 2, 1, 0.9, {0.1, -0.2});
  const SampleGrid g(Box::cube(2, -6.0, 6.0), 41);
  EXPECT_EQ(hoelder_norm(scaled(f, 0.25), 1, 0.5, g).value, 0.25 * hoelder_norm(f, 1, 0.5, g).value);
}

TEST(Norms, DifferenceTableMatchesDirectSeminorm) {
  const JetEvaluator f = gaussian_field(1, 1, 1, 1.0, {0.3}, 0.7);
  const SampleGrid g(Box::cube(1, -5.0, 5.0), 201);
  const JetSamples s = JetSamples::evaluate(f, g, 1);
  const DifferenceTable table(s, 1);
  for (double a : {0.1, 0.5, 1.0}) EXPECT_EQ(table.seminorm(a).value, hoelder_seminorm(s, 1, a).value);
}

TEST(Norms, RejectsBadArguments) {
  const SampleGrid g(Box::cube(1, -1.0, 1.0), 5);
  const JetSamples s = JetSamples::evaluate(abs_field(), g, 0);
  EXPECT_THROW(hoelder_seminorm(s, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(hoelder_seminorm(s, 0, 1.5), std::invalid_argument);
  EXPECT_THROW(sup_norm(s, 1), std::invalid_argument);
}

TEST(NormCsv, HeaderWidthMatchesRows) {
  const SampleGrid g(Box::cube(2, -1.0, 1.0), 3);
  const NormEstimate e = hoelder_seminorm(gaussian_field(2, 1, 0, 1.0), 0, 0.5, g);
  EXPECT_EQ(norm_csv_header(2).size(), 4u + 4u + 1u);
  EXPECT_EQ(norm_csv_row(e, 2).size(), norm_csv_header(2).size());
  EXPECT_EQ(norm_csv_row(e, 2)[0], "seminorm");
}

TEST(Interpolation, HoldsOnMatchedSamples) {
  const JetEvaluator f = bump_mixture(1, 1, 1, {{0.8, {0.2}, 0.5}, {-0.4, {-0.7}, 0.9}});
  const SampleGrid g(Box::cube(1, -7.0, 7.0), 401);
  const InterpolationReport r = verify_interpolation(f, 1, 0.2, 0.5, 0.9, g);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.mu, 0.4 / 0.7);
  EXPECT_THROW(verify_interpolation(f, 1, 0.5, 0.5, 0.9, g), std::invalid_argument);
}

TEST(Inclusion, LowerRegularityIsDominated) {
  const JetEvaluator f = gaussian_field(1, 1, 1, 1.0);
  const SampleGrid g(Box::cube(1, -6.0, 6.0), 401);
  const InclusionReport r = verify_inclusion(f, 0, 1.0, 1, 0.5, g);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.lhs, 2.0 * r.rhs);
}

TEST(Modulus, InverseLogIsSlowlyVanishingButPowerIsNot) {
  const auto t = dyadic_samples(8, 160);
  const Modulus omega = Modulus::inverse_log();
  const ModulusValidation v = validate_modulus(omega, t);
  EXPECT_TRUE(v.zero_at_origin && v.nondecreasing && v.subadditive);
  const std::vector<double> gammas = {0.05, 1.0};
  for (const auto& r : modulus_check(omega, gammas, t)) EXPECT_TRUE(r.pass) << r.gamma;
  const std::vector<double> quarter = {0.25};
  EXPECT_FALSE(modulus_check(Modulus::power(0.5), quarter, t).front().pass);
  const std::vector<double> increasing = {1e-3, 1e-2};
  EXPECT_THROW(modulus_check(omega, quarter, increasing), std::invalid_argument);
}

TEST(Modulus, DyadicSamples) {
  const auto t = dyadic_samples(2, 4);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], 0.25);
  EXPECT_EQ(t[2], 0.0625);
}

TEST(Norms, PsiClosedForms) {
  const JetEvaluator psi = psi_field(1, 0.5);
  EXPECT_DOUBLE_EQ(sup_norm(psi, 0, SampleGrid(Box::cube(1, -1.0, 1.0), 201)).value, 1.0);
  // A single mandatory pair (x, 0) on the plateau isolates C |x|^beta / |x|^beta.
  const SampleGrid only_pair(Box::cube(1, -0.5, 0.0), 1, {{{0.3}, {0.0}}});
  EXPECT_NEAR(hoelder_seminorm(psi, 1, 0.5, only_pair).value, 1.5, 1e-14);
}
