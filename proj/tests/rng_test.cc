#include <gtest/gtest.h>

#include "xlradr/engine/rng.h"

using namespace xlradr;

TEST(Rng, SameSeedSameSequence) {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(Rng, SubstreamsDifferByNameAndIndex) {
  const RngStream root(1);
  EXPECT_NE(root.Substream("traffic", 0).seed(), root.Substream("traffic", 1).seed());
  EXPECT_NE(root.Substream("traffic", 0).seed(), root.Substream("mobility", 0).seed());
  EXPECT_EQ(root.Substream("placement").seed(), RngStream(1).Substream("placement").seed());
}

TEST(Rng, UniformAndBelowStayInRange) {
  RngStream r(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.Uniform(-0.1, 0.1);
    ASSERT_GE(v, -0.1);
    ASSERT_LT(v, 0.1);
    ASSERT_LT(r.Below(45), 45u);
  }
}

TEST(Rng, BelowCoversAllValues) {
  RngStream r(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[r.Below(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}
