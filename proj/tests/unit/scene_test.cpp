#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "segservo/error.hpp"
#include "segservo/scene.hpp"

using namespace segservo;

namespace {

SceneObject sphere_at(double depth, double radius) {
  return {"ball", Sphere{radius}, Pose::from_translation({0, 0, depth})};
}

// One ray per pixel over the whole image, no windowing.
BinaryMask brute_force_render(const SceneObject& object, const Pose& camera, const CameraModel& model) {
  BinaryMask mask(model.width, model.height);
  for (int v = 0; v < model.height; ++v) {
    for (int u = 0; u < model.width; ++u) {
      const Eigen::Vector3d dir = camera.rotation * pixel_ray(model, u, v);
      mask.set(u, v, ray_hits(object, camera.translation, dir));
    }
  }
  return mask;
}

}  // namespace

TEST(Render, ObjectBehindCameraIsEmpty) {
  const CameraModel m = CameraModel::centered(400, 160, 120);
  EXPECT_TRUE(render_silhouette(sphere_at(-1.0, 0.2), Pose::identity(), m).none());
}

TEST(Render, SphereAreaMatchesDiscOracle) {
  const CameraModel m = CameraModel::centered(500, 640, 480);
  const double r = 0.03;
  for (double d : {0.6, 0.8, 1.2}) {
    const double expected = std::numbers::pi * std::pow(m.focal_px * r / d, 2);
    const double got = static_cast<double>(area(render_silhouette(sphere_at(d, r), Pose::identity(), m)));
    EXPECT_NEAR(got / expected, 1.0, 0.02) << "d = " << d;
  }
}

TEST(Render, HalvingDepthQuadruplesArea) {
  const CameraModel m = CameraModel::centered(500, 640, 480);
  const double far = static_cast<double>(area(render_silhouette(sphere_at(1.2, 0.03), Pose::identity(), m)));
  const double near = static_cast<double>(area(render_silhouette(sphere_at(0.6, 0.03), Pose::identity(), m)));
  EXPECT_NEAR(near / far, 4.0, 0.08);
}

TEST(Render, DoublingResolutionKeepsNormalizedArea) {
  const SceneObject box{"box", Box{{0.05, 0.08, 0.02}},
                        Pose::from_xyz_rpy({0.03, -0.02, 0.7}, {0.1, 0.2, 0.5})};
  const CameraModel lo = CameraModel::centered(400, 640, 480);
  const CameraModel hi = CameraModel::centered(800, 1280, 960);
  const double a = static_cast<double>(area(render_silhouette(box, Pose::identity(), lo))) / (640.0 * 480.0);
  const double b = static_cast<double>(area(render_silhouette(box, Pose::identity(), hi))) / (1280.0 * 960.0);
  EXPECT_LT(std::abs(a - b) / b, 0.01);
}

TEST(RenderProperty, WindowedRenderEqualsFullScan) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CameraModel m = CameraModel::centered(150, 160, 120);
  for (int trial = 0; trial < 60; ++trial) {
    const Pose pose = Pose::from_xyz_rpy({0.3 * u(rng), 0.3 * u(rng), 0.5 + 0.4 * u(rng)},
                                         {3 * u(rng), 3 * u(rng), 3 * u(rng)});
    SceneObject object{"o", Sphere{0.05 + 0.03 * u(rng)}, pose};
    if (trial % 3 == 1) object.shape = Box{{0.04 + 0.02 * u(rng), 0.05, 0.03 + 0.02 * u(rng)}};
    if (trial % 3 == 2) object.shape = Disk{0.06, Eigen::Vector3d(u(rng), u(rng), 1).normalized()};
    ASSERT_EQ(render_silhouette(object, Pose::identity(), m), brute_force_render(object, Pose::identity(), m))
        << "trial " << trial;
  }
}

TEST(Render, DiskSeenEdgeOnIsEmptyAndFaceOnIsRound) {
  const CameraModel m = CameraModel::centered(400, 320, 240);
  const SceneObject face{"d", Disk{0.05, Eigen::Vector3d::UnitZ()}, Pose::from_translation({0, 0, 0.5})};
  const double expected = std::numbers::pi * std::pow(400 * 0.05 / 0.5, 2);
  EXPECT_NEAR(static_cast<double>(area(render_silhouette(face, Pose::identity(), m))) / expected, 1.0, 0.03);
  const SceneObject edge{"d", Disk{0.05, Eigen::Vector3d::UnitX()}, Pose::from_translation({0, 0, 0.5})};
  EXPECT_LE(area(render_silhouette(edge, Pose::identity(), m)), 1);
}

TEST(Scene, LookupAndValidation) {
  Scene scene;
  scene.add(sphere_at(1.0, 0.1));
  EXPECT_TRUE(scene.contains("ball"));
  EXPECT_THROW(scene.object("nope"), Error);
  try {
    render_silhouette(scene, Pose::identity(), CameraModel::centered(100, 64, 48), "nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownObject);
  }
  EXPECT_THROW(scene.add(sphere_at(2.0, 0.1)), Error);
  EXPECT_THROW(validate(SceneObject{"bad", Sphere{-1.0}, Pose::identity()}), Error);
}

TEST(Scene, ReferenceDepthPerShape) {
  EXPECT_EQ(reference_depth_z({"s", Sphere{0.1}, Pose::from_translation({0, 0, 0.3})}), 0.3);
  EXPECT_DOUBLE_EQ(reference_depth_z({"b", Box{{0.1, 0.1, 0.02}}, Pose::from_translation({0, 0, 0.02})}), 0.04);
  EXPECT_EQ(reference_depth_z({"d", Disk{0.1, Eigen::Vector3d::UnitZ()}, Pose::from_translation({0, 0, 0.01})}),
            0.01);
}
