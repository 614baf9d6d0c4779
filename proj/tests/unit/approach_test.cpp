#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "segservo/approach.hpp"
#include "segservo/error.hpp"
#include "segservo/jacobian_io.hpp"

using namespace segservo;

namespace {

struct ApproachRig {
  const SceneDescription& desc = oracle::hsr_scene();
  const CameraRig& rig = desc.camera("grasp");
  Scene scene = desc.scene;
  ServoConfig servo;
  ApproachConfig config;
  std::string object = "sugar_box";

  ApproachRig() {
    const ServoPreset p = servo_preset("base");
    servo.joints = p.joints;
    servo.coupling = p.coupling;
    servo.target = p.target;
    servo.gain = 0.5;
    servo.alpha = 0.0;
  }

  ApproachResult run() const {
    const SimulatedSegmenter seg(scene, rig.model, object, NoiseModel{});
    EpisodeOptions options;
    options.object_position = scene.object(object).pose.translation;
    const PseudoJacobian j = load_jacobian(oracle::data_dir() / "jacobians" / "base.txt").jacobian;
    return approach_depth(rig.chain, seg, servo, j, desc.home, config, options);
  }
};

}  // namespace

TEST(Approach, SugarBoxDepthWithinOneCentimeter) {
  ApproachRig a;
  const ApproachResult r = a.run();
  ASSERT_EQ(r.status, EpisodeStatus::Converged);
  EXPECT_TRUE(r.converged);
  ASSERT_TRUE(r.final_estimate.has_value());
  EXPECT_GE(static_cast<int>(r.observations.size()), a.config.min_observations);
  EXPECT_LE(r.traveled, a.config.travel_budget + 1e-12);
  EXPECT_NEAR(r.final_estimate->z_object_hat, reference_depth_z(a.scene.object("sugar_box")), 0.01);
  EXPECT_EQ(r.trace.size(), r.observations.size() - 1);
}

TEST(Approach, ObservationsFollowTheLiftSteps) {
  ApproachRig a;
  const ApproachResult r = a.run();
  ASSERT_GE(r.observations.size(), 2u);
  for (std::size_t i = 1; i < r.observations.size(); ++i) {
    EXPECT_LT(r.observations[i].z_camera, r.observations[i - 1].z_camera);
    EXPECT_GT(r.observations[i].s_A, r.observations[i - 1].s_A);
  }
  // With every frame centered, consecutive observations are one decrement apart.
  if (r.discarded.empty()) {
    for (std::size_t i = 1; i < r.observations.size(); ++i) {
      EXPECT_NEAR(r.observations[i - 1].z_camera - r.observations[i].z_camera, a.config.decrement, 1e-9);
    }
  }
  // Every record of the combined log has a distinct, increasing step.
  for (std::size_t i = 1; i < r.log.records.size(); ++i) {
    EXPECT_GT(r.log.records[i].step, r.log.records[i - 1].step);
    EXPECT_GT(r.log.records[i].frame, r.log.records[i - 1].frame);
  }
}

TEST(Approach, ShortBudgetStopsWithoutConvergence) {
  ApproachRig a;
  a.config.travel_budget = 0.05;
  const ApproachResult r = a.run();
  EXPECT_EQ(r.status, EpisodeStatus::MaxSteps);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.traveled, 0.05 + 1e-12);
  EXPECT_LE(r.observations.size(), 3u);
}

TEST(Approach, MissingObjectIsLost) {
  ApproachRig a;
  Pose far = a.scene.object("sugar_box").pose;
  far.translation = {-3.0, 2.0, 0.0195};
  a.scene.set_pose("sugar_box", far);
  const ApproachResult r = a.run();
  EXPECT_EQ(r.status, EpisodeStatus::ObjectLost);
  EXPECT_TRUE(r.observations.empty());
  EXPECT_FALSE(r.final_estimate.has_value());
}

TEST(Approach, ConfigValidation) {
  const auto bad = [](auto mutate) {
    ApproachConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::ConfigError;
    }
    return false;
  };
  EXPECT_NO_THROW(ApproachConfig{}.validate());
  EXPECT_TRUE(bad([](ApproachConfig& c) { c.decrement = 0.0; }));
  EXPECT_TRUE(bad([](ApproachConfig& c) { c.window = 1; }));
  EXPECT_TRUE(bad([](ApproachConfig& c) { c.min_observations = 1; }));
  EXPECT_TRUE(bad([](ApproachConfig& c) { c.tolerance = -1.0; }));
  EXPECT_TRUE(bad([](ApproachConfig& c) { c.lift_joint.clear(); }));
}
