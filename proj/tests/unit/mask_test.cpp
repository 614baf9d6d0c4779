#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "segservo/error.hpp"
#include "segservo/mask.hpp"

using namespace segservo;

namespace {

BinaryMask with_pixels(int w, int h, std::initializer_list<std::pair<int, int>> pixels) {
  BinaryMask m(w, h);
  for (auto [x, y] : pixels) m.set(x, y, true);
  return m;
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Mask, AreaExamples) {
  BinaryMask full(640, 480);
  for (int y = 0; y < 480; ++y) {
    for (int x = 0; x < 640; ++x) full.set(x, y, true);
  }
  EXPECT_EQ(area(full), 307200);
  EXPECT_EQ(area(BinaryMask(640, 480)), 0);
  EXPECT_EQ(area(with_pixels(3, 3, {{0, 0}, {2, 1}, {1, 2}})), 3);
}

TEST(Mask, CentroidExamples) {
  const FeatureVector one = centroid(with_pixels(64, 64, {{10, 20}}));
  EXPECT_EQ(one.s_x, 10.0);
  EXPECT_EQ(one.s_y, 20.0);
  const FeatureVector diag = centroid(with_pixels(4, 4, {{0, 0}, {1, 1}}));
  EXPECT_EQ(diag.s_x, 0.5);
  EXPECT_EQ(diag.s_y, 0.5);
  BinaryMask five(5, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) five.set(x, y, true);
  }
  EXPECT_EQ(centroid(five).s_x, 2.0);
  EXPECT_EQ(centroid(five).s_y, 2.0);
  EXPECT_EQ(kind_of([] { centroid(BinaryMask(8, 8)); }), ErrorKind::EmptyMask);
}

TEST(Mask, JaccardExamples) {
  const BinaryMask a = with_pixels(3, 1, {{0, 0}, {1, 0}});
  const BinaryMask b = with_pixels(3, 1, {{1, 0}, {2, 0}});
  EXPECT_DOUBLE_EQ(jaccard(a, b), 1.0 / 3.0);
  EXPECT_EQ(jaccard(a, a), 1.0);
  EXPECT_EQ(jaccard(with_pixels(3, 1, {{0, 0}}), with_pixels(3, 1, {{2, 0}})), 0.0);
  EXPECT_EQ(kind_of([] { jaccard(BinaryMask(3, 3), BinaryMask(3, 3)); }), ErrorKind::EmptyUnion);
  EXPECT_EQ(kind_of([] { jaccard(BinaryMask(3, 3), BinaryMask(4, 3)); }), ErrorKind::DimensionMismatch);
}

TEST(Mask, RejectsBadLabels) {
  const std::vector<std::uint8_t> two{0, 2, 1, 0};
  EXPECT_EQ(kind_of([&] { BinaryMask::from_labels(2, 2, two); }), ErrorKind::InvalidArgument);
  const std::vector<std::uint8_t> short_labels{0, 1, 1};
  EXPECT_EQ(kind_of([&] { BinaryMask::from_labels(2, 2, short_labels); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { BinaryMask(0, 3); }), ErrorKind::InvalidArgument);
}

TEST(Mask, LabelsRoundTrip) {
  std::mt19937_64 rng(3);
  const BinaryMask m = oracle::random_mask(rng, 37, 23);
  const auto labels = m.labels();
  EXPECT_EQ(BinaryMask::from_labels(37, 23, labels), m);
}

TEST(MaskProperty, MatchesNaiveOracleOnRandomMasks) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 70);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const BinaryMask a = oracle::random_mask(rng, w, h);
    const BinaryMask b = oracle::random_mask(rng, w, h);
    ASSERT_EQ(area(a), oracle::naive_area(a));
    const OverlapCounts got = overlap(a, b);
    const OverlapCounts want = oracle::naive_overlap(a, b);
    ASSERT_EQ(got.intersection, want.intersection);
    ASSERT_EQ(got.union_count, want.union_count);
    if (area(a) > 0) {
      const FeatureVector c = centroid(a);
      const FeatureVector o = oracle::naive_centroid(a);
      ASSERT_NEAR(c.s_x, o.s_x, 1e-12);
      ASSERT_NEAR(c.s_y, o.s_y, 1e-12);
      ASSERT_GE(c.s_x, 0.0);
      ASSERT_LT(c.s_x, w);
      ASSERT_GE(c.s_y, 0.0);
      ASSERT_LT(c.s_y, h);
      ASSERT_EQ(jaccard(a, a), 1.0);
    }
    if (want.union_count > 0) {
      const double j = jaccard(a, b);
      ASSERT_EQ(j, jaccard(b, a));
      ASSERT_GE(j, 0.0);
      ASSERT_LE(j, 1.0);
    }
  }
}

TEST(MaskProperty, CentroidIsTranslationEquivariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask small = oracle::random_mask(rng, 20, 15);
    if (small.none()) continue;
    std::uniform_int_distribution<int> shift(0, 30);
    const int dx = shift(rng);
    const int dy = shift(rng);
    BinaryMask moved(60, 50);
    BinaryMask placed(60, 50);
    for (int y = 0; y < 15; ++y) {
      for (int x = 0; x < 20; ++x) {
        placed.set(x, y, small.get(x, y));
        moved.set(x + dx, y + dy, small.get(x, y));
      }
    }
    const FeatureVector a = centroid(placed);
    const FeatureVector b = centroid(moved);
    ASSERT_NEAR(b.s_x - a.s_x, dx, 1e-12);
    ASSERT_NEAR(b.s_y - a.s_y, dy, 1e-12);
    ASSERT_EQ(area(placed), area(moved));
  }
}

TEST(Mask, PbmRoundTrip) {
  std::mt19937_64 rng(8);
  const BinaryMask m = oracle::random_mask(rng, 13, 7);
  std::stringstream text;
  write_pbm(text, m);
  EXPECT_EQ(read_pbm(text), m);
}
