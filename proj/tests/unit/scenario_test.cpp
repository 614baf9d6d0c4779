#include <gtest/gtest.h>

#include <string>

#include "oracles.hpp"
#include "segservo/error.hpp"
#include "segservo/scenario.hpp"

using namespace segservo;

namespace {

std::filesystem::path scenarios() { return oracle::data_dir() / "scenarios"; }

const std::string kMinimal = R"(experiment: learn
scene: ../scenes/hsr_like.yaml
seed: 3
output: out/x
target_object: sugar_box
servo: {preset: base}
)";

ErrorKind parse_error(const std::string& text) {
  try {
    parse_scenario(text, scenarios());
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed:\n" << text;
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Scenario, ShippedFilesLoad) {
  for (const char* name : {"learn_base", "learn_base_grasp", "learn_head", "servo_step", "approach_depth", "grasp",
                           "trials"}) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(load_scenario_file(scenarios() / (std::string(name) + ".yaml")));
  }
}

TEST(Scenario, MinimalDefaults) {
  const ScenarioConfig c = parse_scenario(kMinimal, scenarios());
  EXPECT_EQ(c.kind, ExperimentKind::Learn);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.servo.camera, "grasp");
  EXPECT_EQ(c.servo.config.joints, (std::vector<std::string>{"base_forward", "base_lateral"}));
  EXPECT_EQ(c.servo.config.alpha, 0.1);
  EXPECT_EQ(c.servo.init_seed, kDefaultJacobianSeed);
  EXPECT_EQ(c.start_pose, c.scene.home);
  EXPECT_EQ(c.noise.seed, 3u);
  EXPECT_TRUE(c.noise.neutral());
  EXPECT_EQ(c.scene_path, (oracle::data_dir() / "scenes" / "hsr_like.yaml").lexically_normal());
}

TEST(Scenario, StartPoseOverlaysHome) {
  const ScenarioConfig c = parse_scenario(kMinimal + "start_pose: {base_forward: 0.3}\n", scenarios());
  EXPECT_EQ(c.start_pose.at("base_forward"), 0.3);
  EXPECT_EQ(c.start_pose.at("arm_lift"), c.scene.home.at("arm_lift"));
}

TEST(Scenario, Rejections) {
  std::string bad_kind = kMinimal;
  bad_kind.replace(bad_kind.find("learn"), 5, "dance");
  EXPECT_EQ(parse_error(bad_kind), ErrorKind::ConfigError);

  std::string no_target = kMinimal;
  no_target.erase(no_target.find("target_object"), std::string("target_object: sugar_box\n").size());
  EXPECT_EQ(parse_error(no_target), ErrorKind::ConfigError);

  std::string bad_object = kMinimal;
  bad_object.replace(bad_object.find("sugar_box"), 9, "anvil");
  EXPECT_EQ(parse_error(bad_object), ErrorKind::ConfigError);

  std::string bad_scene = kMinimal;
  bad_scene.replace(bad_scene.find("hsr_like"), 8, "missing");
  EXPECT_EQ(parse_error(bad_scene), ErrorKind::ConfigError);

  EXPECT_EQ(parse_error(kMinimal + "start_pose: {elbow: 1.0}\n"), ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(kMinimal + "max_resets: -1\n"), ErrorKind::ConfigError);

  std::string bad_preset = kMinimal;
  bad_preset.replace(bad_preset.find("preset: base"), 12, "preset: tail");
  EXPECT_EQ(parse_error(bad_preset), ErrorKind::ConfigError);

  std::string grasp = kMinimal;
  grasp.replace(grasp.find("learn"), 5, "grasp");
  EXPECT_EQ(parse_error(grasp + "grasp: {retries: 1}\n"), ErrorKind::ConfigError);

  std::string trials = kMinimal;
  trials.replace(trials.find("learn"), 5, "trial_suite");
  EXPECT_EQ(parse_error(trials), ErrorKind::ConfigError);
}

TEST(Scenario, MalformedYamlIsAConfigError) {
  const ErrorKind k = parse_error("experiment: [learn\n");
  EXPECT_TRUE(k == ErrorKind::ConfigError || k == ErrorKind::ParseError);
}

TEST(Scenario, GraspBlock) {
  const ScenarioConfig c = load_scenario_file(scenarios() / "grasp.yaml");
  EXPECT_EQ(c.kind, ExperimentKind::Grasp);
  EXPECT_EQ(c.fine.preset, "base_grasp");
  EXPECT_EQ(c.fine.config.target.s_x, 220.0);
  EXPECT_EQ(c.fine.config.target.s_y, 240.0);
  EXPECT_EQ(c.grasp.gripper.model.focal_px, c.scene.camera("grasp").model.focal_px);
  EXPECT_EQ(c.grasp.retries, 2);
  EXPECT_TRUE(c.servo.jacobian.has_value());
}

TEST(Scenario, TrialSeedsDeriveFromTheScenarioSeed) {
  ScenarioConfig c = load_scenario_file(scenarios() / "trials.yaml");
  ASSERT_EQ(c.trials.size(), 8u);
  EXPECT_EQ(c.trials[0].noise.seed, 51u + 1000u);
  EXPECT_EQ(c.trials[7].noise.dropout_prob, 1.0);
  EXPECT_EQ(c.trials[0].noise.dropout_prob, 0.02);
  override_seed(c, 9);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.noise.seed, 9u);
  EXPECT_EQ(c.trials[2].noise.seed, 9u + 3000u);
}

TEST(Scenario, ExperimentKindNames) {
  for (auto k : {ExperimentKind::Learn, ExperimentKind::ServoStep, ExperimentKind::ApproachDepth,
                 ExperimentKind::Grasp, ExperimentKind::TrialSuite}) {
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_experiment_kind("learn "), Error);
}
