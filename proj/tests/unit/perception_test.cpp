#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "segservo/error.hpp"
#include "segservo/perception.hpp"

using namespace segservo;

namespace {

Scene ball_scene() {
  Scene s;
  s.add({"ball", Sphere{0.08}, Pose::from_translation({0.02, -0.01, 0.6})});
  return s;
}

BinaryMask solid_square(int w, int h, int x0, int y0, int side) {
  BinaryMask m(w, h);
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) m.set(x, y, true);
  }
  return m;
}

}  // namespace

TEST(Perception, NeutralNoiseIsIdentity) {
  const Scene s = ball_scene();
  const CameraModel m = CameraModel::centered(400, 320, 240);
  NoiseModel noise;
  noise.seed = 77;
  ASSERT_TRUE(noise.neutral());
  for (std::uint64_t frame : {0u, 1u, 99u}) {
    EXPECT_EQ(segment(s, Pose::identity(), m, "ball", noise, frame), render_silhouette(s, Pose::identity(), m, "ball"));
  }
}

TEST(Perception, TotalDropoutEmptiesTheMask) {
  NoiseModel noise;
  noise.dropout_prob = 1.0;
  EXPECT_TRUE(apply_noise(solid_square(64, 64, 5, 5, 40), noise, 3).none());
}

TEST(Perception, DropoutFollowsBinomialStatistics) {
  const BinaryMask clean = solid_square(200, 200, 50, 50, 100);  // 10,000 pixels
  NoiseModel noise;
  noise.dropout_prob = 0.3;
  const double sigma = std::sqrt(10000 * 0.3 * 0.7);
  for (std::uint64_t frame = 0; frame < 20; ++frame) {
    noise.seed = 1000 + frame;
    const double kept = static_cast<double>(area(apply_noise(clean, noise, frame)));
    EXPECT_LE(std::abs(kept - 7000.0), 3 * sigma) << "frame " << frame;
  }
}

TEST(Perception, DeterministicPerSeedAndFrame) {
  const BinaryMask clean = solid_square(120, 90, 30, 20, 40);
  NoiseModel noise;
  noise.seed = 5;
  noise.boundary_morph = 1;
  noise.dropout_prob = 0.1;
  noise.blob_rate = 3.0;
  const BinaryMask a = apply_noise(clean, noise, 12);
  EXPECT_EQ(a, apply_noise(clean, noise, 12));
  // Regenerating an earlier frame after later ones gives the same mask.
  apply_noise(clean, noise, 13);
  EXPECT_EQ(a, apply_noise(clean, noise, 12));
  EXPECT_NE(a, apply_noise(clean, noise, 11));
  noise.seed = 6;
  EXPECT_NE(a, apply_noise(clean, noise, 12));
}

TEST(PerceptionProperty, DilationGrowsAndErosionShrinks) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, 48, 36);
    for (int r : {1, 2, 3}) {
      const BinaryMask grown = dilate(m, r);
      const BinaryMask shrunk = erode(m, r);
      ASSERT_GE(area(grown), area(m));
      ASSERT_LE(area(shrunk), area(m));
      ASSERT_EQ(overlap(grown, m).intersection, area(m));   // m is a subset of its dilation
      ASSERT_EQ(overlap(shrunk, m).intersection, area(shrunk));  // erosion is a subset of m
    }
  }
}

TEST(Perception, MorphologyOnASquare) {
  const BinaryMask sq = solid_square(30, 30, 10, 10, 10);
  EXPECT_EQ(area(erode(sq, 1)), 64);
  EXPECT_EQ(area(dilate(sq, 1)), 100 + 4 * 10);
  EXPECT_EQ(dilate(sq, 0), sq);
}

TEST(Perception, BlobsAddFalsePositives) {
  const BinaryMask empty(200, 200);
  NoiseModel noise;
  noise.seed = 9;
  noise.blob_rate = 5.0;
  std::int64_t total = 0;
  for (std::uint64_t f = 0; f < 10; ++f) total += area(apply_noise(empty, noise, f));
  EXPECT_GT(total, 0);
}

TEST(Perception, ValidatesParameters) {
  NoiseModel bad;
  bad.dropout_prob = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.blob_rate = -1;
  EXPECT_THROW(bad.validate(), Error);
  bad = {};
  bad.blob_radius_min = 4;
  bad.blob_radius_max = 2;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Perception, SimulatedSegmenterUsesItsScene) {
  const Scene s = ball_scene();
  const CameraModel m = CameraModel::centered(400, 320, 240);
  const SimulatedSegmenter seg(s, m, "ball", NoiseModel{});
  EXPECT_EQ(seg.segment(Pose::identity(), 0), render_silhouette(s, Pose::identity(), m, "ball"));
  EXPECT_THROW(SimulatedSegmenter(s, m, "cube", NoiseModel{}).segment(Pose::identity(), 0), Error);
}
