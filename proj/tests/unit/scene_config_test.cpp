#include <gtest/gtest.h>

#include "oracles.hpp"
#include "segservo/error.hpp"
#include "segservo/scene_config.hpp"

using namespace segservo;

namespace {

const char* kMinimal = R"(
joints:
  slide: {type: prismatic, axis: [1, 0, 0], limits: [-1, 1]}
  turn:  {type: revolute, axis: [0, 0, 1], limits: [-3, 3]}
cameras:
  eye:
    intrinsics: {focal_px: 300, width: 320, height: 240}
    chain:
      - {joint: slide}
      - {joint: turn, origin: {xyz: [0, 0, 1]}}
objects:
  - {id: ball, shape: sphere, radius: 0.05, pose: {xyz: [1, 0, 0]}}
  - {id: lid, shape: disk, radius: 0.04, normal: [0, 0, 1]}
home:
  turn: 0.5
)";

ErrorKind parse_error(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(SceneConfig, ParsesMinimalScene) {
  const SceneDescription d = parse_scene(kMinimal);
  const CameraRig& eye = d.camera("eye");
  EXPECT_EQ(eye.model.principal_x, 160.0);
  EXPECT_EQ(eye.model.principal_y, 120.0);
  ASSERT_EQ(eye.chain.joints().size(), 2u);
  EXPECT_EQ(eye.chain.joints()[1].origin.translation, Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(d.home.entries()[0].first, "slide");
  EXPECT_EQ(d.home.at("slide"), 0.0);
  EXPECT_EQ(d.home.at("turn"), 0.5);
  EXPECT_TRUE(std::holds_alternative<Disk>(d.scene.object("lid").shape));
  EXPECT_THROW(d.camera("missing"), Error);
}

TEST(SceneConfig, RejectsBadInput) {
  std::string unknown_joint = kMinimal;
  unknown_joint.replace(unknown_joint.find("{joint: slide}"), 14, "{joint: nope}");
  EXPECT_EQ(parse_error(unknown_joint), ErrorKind::ConfigError);

  std::string bad_shape = kMinimal;
  bad_shape.replace(bad_shape.find("shape: sphere"), 13, "shape: torus");
  EXPECT_EQ(parse_error(bad_shape), ErrorKind::ConfigError);

  std::string bad_home = kMinimal;
  bad_home.replace(bad_home.find("turn: 0.5"), 9, "wheel: 1");
  EXPECT_EQ(parse_error(bad_home), ErrorKind::ConfigError);

  EXPECT_EQ(parse_error("joints: [unclosed"), ErrorKind::ConfigError);
  EXPECT_THROW(load_scene_file("/nonexistent/scene.yaml"), Error);
}

TEST(SceneConfig, ShippedSceneLoads) {
  const auto& d = oracle::hsr_scene();
  EXPECT_EQ(d.home.size(), 10u);
  EXPECT_EQ(d.home.at("arm_lift"), 0.6);
  EXPECT_EQ(d.camera("grasp").model.focal_px, 400.0);
  EXPECT_EQ(d.camera("head").chain.joints().back().name, "head_tilt");
  for (const char* id : {"sugar_box", "baseball", "plate", "gelatin", "potted_meat", "tuna_lid"}) {
    EXPECT_TRUE(d.scene.contains(id)) << id;
  }
}
