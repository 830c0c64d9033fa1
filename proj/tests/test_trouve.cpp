#include <gtest/gtest.h>

#include "holoflow/error.hpp"
#include "holoflow/fields.hpp"
#include "holoflow/trouve.hpp"

using namespace holoflow;

TEST(Trouve, InadmissibleSegmentIsReported) {
  const JetEvaluator phi = linear_field(1, 1, -1.5);
  const auto t = default_t_grid();
  try {
    certify_segment(phi, t);
    FAIL() << "expected segment_not_admissible";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::segment_not_admissible);
  }
}

TEST(Trouve, SegmentCertificateForSmallChart) {
  const auto t = default_t_grid();
  ASSERT_EQ(t.size(), 33u);
  const SegmentPath p = certify_segment(gaussian_field(1, 1, 1, 0.1), t);
  EXPECT_GT(p.certificate, 0.8);
  EXPECT_LE(p.certificate, 1.0);
}

TEST(Trouve, PolygonReportsTheFailingSegment) {
  const DiffeoField v0 = DiffeoField::certify(plateau_shift(1, 1, {0.05}));
  const DiffeoField v1 = DiffeoField::certified(linear_field(1, 1, -1.5), 1.0);
  try {
    polygon_field({v0, v1});
    FAIL() << "expected polygon_not_admissible";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::polygon_not_admissible);
    ASSERT_TRUE(e.index());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(Trouve, SegmentFlowRecoversTheChart) {
  const JetEvaluator phi = gaussian_field(1, 1, 1, 0.1);
  const SampleGrid g(phi.support().enlarged(*phi.value_bound()), 101);
  EXPECT_LT(roundtrip_error(phi, 1, 0.3, 1024, g), 1e-4);
}

TEST(Trouve, PolygonOfShiftsEndsAtTheLastVertex) {
  const DiffeoField s1 = DiffeoField::certify(plateau_shift(1, 1, {0.05}));
  const DiffeoField s2 = DiffeoField::certify(plateau_shift(1, 1, {0.03}));
  const DiffeoField v2 = compose(s2, s1);
  const TimeField u = polygon_field({s1, v2});
  EXPECT_EQ(u.pieces(), 2u);
  const Point x{0.1};
  const Jet j = flow_jet(u, x, 1, {256, 0, 1.0});
  EXPECT_NEAR(j.value()[0], 0.18, 1e-8);
  EXPECT_NEAR(j.block(1)[0], 1.0, 1e-8);
}
