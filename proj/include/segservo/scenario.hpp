#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segservo/approach.hpp"
#include "segservo/grasp.hpp"
#include "segservo/perception.hpp"
#include "segservo/scene_config.hpp"
#include "segservo/servo.hpp"

namespace segservo {

enum class ExperimentKind { Learn, ServoStep, ApproachDepth, Grasp, TrialSuite };
const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);  // throws ConfigError

// One servo loop configuration built from a named coupling preset.
struct ServoSettings {
  std::string preset;
  std::string camera;
  ServoConfig config;
  double init_seed = kDefaultJacobianSeed;
  int max_steps = 50;
  std::optional<std::filesystem::path> jacobian;  // learned J+ for frozen or warm-started runs
};

// One row of a trial suite: an object on a support of the given height.
struct TrialSpec {
  std::string item;
  std::string object;
  double height = 0.0;  // added to the object's z in the scene file
  std::optional<Eigen::Vector3d> position;  // xy override and base z before the support height
  NoiseModel noise;
  bool grasp = false;
};

struct ScenarioConfig {
  std::filesystem::path config_dir;  // relative paths below resolve against this
  std::filesystem::path scene_path;
  ExperimentKind kind = ExperimentKind::Learn;
  std::uint64_t seed = 0;
  std::filesystem::path output;

  ServoSettings servo;
  JointState start_pose;  // scene home overlaid with the scenario's start_pose block
  std::string target_object;
  std::optional<Eigen::Vector3d> object_position;
  NoiseModel noise;

  // learn
  int max_resets = 5;
  int update_budget = 60;

  // servo_step: object positions, one episode each
  std::vector<Eigen::Vector3d> placements;

  // approach_depth and grasp
  ApproachConfig approach;
  std::optional<std::filesystem::path> replay;

  // grasp and trial_suite
  ServoSettings fine;
  GraspConfig grasp;
  std::vector<TrialSpec> trials;

  SceneDescription scene;
};

// Parses scenario YAML. Relative paths resolve against base_dir; the scene
// file is loaded and joint names, presets and objects are checked.
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

// Replaces the scenario seed and every noise seed derived from it.
void override_seed(ScenarioConfig& config, std::uint64_t seed);

}  // namespace segservo
