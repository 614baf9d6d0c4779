#include "segservo/scenario.hpp"

#include <fstream>
#include <sstream>

#include "yaml_util.hpp"

namespace segservo {

using detail::as;
using detail::get_or;
using detail::require;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Learn: return "learn";
    case ExperimentKind::ServoStep: return "servo_step";
    case ExperimentKind::ApproachDepth: return "approach_depth";
    case ExperimentKind::Grasp: return "grasp";
    case ExperimentKind::TrialSuite: return "trial_suite";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::Learn, ExperimentKind::ServoStep, ExperimentKind::ApproachDepth,
                    ExperimentKind::Grasp, ExperimentKind::TrialSuite}) {
    if (text == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::ConfigError,
              "experiment must be one of learn, servo_step, approach_depth, grasp, trial_suite; got '" + text + "'");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  const std::filesystem::path p(text);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::filesystem::path existing(const std::filesystem::path& path, const std::string& what) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::ConfigError, what + " does not exist: " + path.string());
  }
  return path;
}

NoiseModel parse_noise(const YAML::Node& node, std::uint64_t seed, const std::string& where) {
  NoiseModel noise;
  noise.seed = seed;
  if (!node) return noise;
  noise.boundary_morph = get_or<int>(node, "boundary_morph", 0, where);
  noise.dropout_prob = get_or<double>(node, "dropout_prob", 0.0, where);
  noise.blob_rate = get_or<double>(node, "blob_rate", 0.0, where);
  if (const YAML::Node radius = node["blob_radius"]) {
    const auto range = as<std::vector<double>>(radius, where + ".blob_radius");
    if (range.size() != 2) throw Error(ErrorKind::ConfigError, where + ".blob_radius: expected [min, max]");
    noise.blob_radius_min = range[0];
    noise.blob_radius_max = range[1];
  }
  noise.validate();
  return noise;
}

ServoSettings parse_servo(const YAML::Node& node, const SceneDescription& scene, const std::filesystem::path& base,
                          const std::string& where) {
  ServoSettings s;
  s.preset = as<std::string>(require(node, "preset", where), where + ".preset");
  const ServoPreset preset = servo_preset(s.preset);
  s.camera = preset.camera;
  const CameraRig& rig = scene.camera(s.camera);

  ServoConfig& c = s.config;
  c.joints = preset.joints;
  c.coupling = get_or<bool>(node, "full_coupling", false, where)
                   ? CouplingMatrix::ones(static_cast<int>(preset.joints.size()), kFeatureCount)
                   : preset.coupling;
  c.target = preset.target;
  if (const YAML::Node target = node["target"]) {
    const auto t = as<std::vector<double>>(target, where + ".target");
    if (t.size() != 2) throw Error(ErrorKind::ConfigError, where + ".target: expected [s_x, s_y]");
    c.target = {t[0], t[1]};
  }
  c.gain = get_or<double>(node, "gain", c.gain, where);
  c.alpha = get_or<double>(node, "alpha", c.alpha, where);
  c.tolerance_px = get_or<double>(node, "tolerance_px", c.tolerance_px, where);
  c.singular_epsilon = get_or<double>(node, "singular_epsilon", c.singular_epsilon, where);
  c.validate(rig.model);
  for (const auto& joint : c.joints) {
    if (!rig.chain.find(joint)) {
      throw Error(ErrorKind::ConfigError, where + ": joint '" + joint + "' is not on camera '" + s.camera + "'");
    }
  }

  s.init_seed = get_or<double>(node, "init_seed", s.init_seed, where);
  s.max_steps = get_or<int>(node, "max_steps", s.max_steps, where);
  if (s.max_steps < 0) throw Error(ErrorKind::ConfigError, where + ".max_steps must be non-negative");
  if (const YAML::Node path = node["jacobian"]) {
    s.jacobian = existing(resolve(base, as<std::string>(path, where + ".jacobian")), where + ".jacobian");
  }
  return s;
}

Eigen::Vector3d parse_position(const YAML::Node& node, const std::string& where) {
  return detail::as_vec3(node, where);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  const YAML::Node root = detail::load_yaml_text(text, "scenario");
  ScenarioConfig config;
  config.config_dir = base_dir;
  config.kind = parse_experiment_kind(as<std::string>(require(root, "experiment", "scenario"), "experiment"));
  config.seed = as<std::uint64_t>(require(root, "seed", "scenario"), "seed");
  config.output = as<std::string>(require(root, "output", "scenario"), "output");

  config.scene_path =
      existing(resolve(base_dir, as<std::string>(require(root, "scene", "scenario"), "scene")), "scene file");
  config.scene = load_scene_file(config.scene_path);

  config.servo = parse_servo(require(root, "servo", "scenario"), config.scene, base_dir, "servo");

  config.start_pose = config.scene.home;
  if (const YAML::Node start = root["start_pose"]) {
    for (const auto& entry : start) {
      const auto name = as<std::string>(entry.first, "start_pose");
      if (!config.start_pose.contains(name)) {
        throw Error(ErrorKind::ConfigError, "start_pose: unknown joint '" + name + "'");
      }
      config.start_pose.set(name, as<double>(entry.second, "start_pose." + name));
    }
  }

  if (const YAML::Node object = root["target_object"]) {
    config.target_object = as<std::string>(object, "target_object");
    if (!config.scene.scene.contains(config.target_object)) {
      throw Error(ErrorKind::ConfigError, "target_object '" + config.target_object + "' is not in the scene");
    }
  } else if (config.kind != ExperimentKind::TrialSuite) {
    throw Error(ErrorKind::ConfigError, "scenario: missing key 'target_object'");
  }
  if (const YAML::Node pos = root["object_position"]) config.object_position = parse_position(pos, "object_position");

  config.noise = parse_noise(root["noise"], config.seed, "noise");

  config.max_resets = get_or<int>(root, "max_resets", config.max_resets, "scenario");
  config.update_budget = get_or<int>(root, "update_budget", config.update_budget, "scenario");
  if (config.max_resets < 0 || config.update_budget < 1) {
    throw Error(ErrorKind::ConfigError, "max_resets must be >= 0 and update_budget >= 1");
  }

  if (const YAML::Node placements = root["placements"]) {
    std::size_t i = 0;
    for (const auto& p : placements) {
      config.placements.push_back(parse_position(p, "placements[" + std::to_string(i++) + "]"));
    }
  }

  if (const YAML::Node a = root["approach"]) {
    ApproachConfig& ac = config.approach;
    ac.lift_joint = get_or<std::string>(a, "lift_joint", ac.lift_joint, "approach");
    ac.decrement = get_or<double>(a, "decrement", ac.decrement, "approach");
    ac.travel_budget = get_or<double>(a, "travel_budget", ac.travel_budget, "approach");
    ac.min_observations = get_or<int>(a, "min_observations", ac.min_observations, "approach");
    ac.window = get_or<int>(a, "window", ac.window, "approach");
    ac.tolerance = get_or<double>(a, "tolerance", ac.tolerance, "approach");
    ac.max_area_px = get_or<double>(a, "max_area_px", ac.max_area_px, "approach");
    ac.recenter_max_steps = get_or<int>(a, "recenter_max_steps", ac.recenter_max_steps, "approach");
    ac.validate();
  }
  if (const YAML::Node r = root["replay"]) {
    config.replay = existing(resolve(base_dir, as<std::string>(r, "replay")), "replay fixture");
  }

  const YAML::Node g = root["grasp"];
  if (g) {
    GraspConfig& gc = config.grasp;
    GripperTemplate& gt = gc.gripper;
    gt.z_gripper = get_or<double>(g, "z_gripper", gt.z_gripper, "grasp");
    gt.max_width = get_or<double>(g, "max_width", gt.max_width, "grasp");
    gt.finger_width = get_or<double>(g, "finger_width", gt.finger_width, "grasp");
    gt.finger_length = get_or<double>(g, "finger_length", gt.finger_length, "grasp");
    if (const YAML::Node c = g["fingertip_center"]) {
      const auto xy = as<std::vector<double>>(c, "grasp.fingertip_center");
      if (xy.size() != 2) throw Error(ErrorKind::ConfigError, "grasp.fingertip_center: expected [x, y]");
      gt.center_x = xy[0];
      gt.center_y = xy[1];
    }
    gc.grid_step = get_or<double>(g, "grid_step", gc.grid_step, "grasp");
    gc.check_factor = get_or<double>(g, "check_factor", gc.check_factor, "grasp");
    gc.retries = get_or<int>(g, "retries", gc.retries, "grasp");
    gc.capture_radius = get_or<double>(g, "capture_radius", gc.capture_radius, "grasp");
    gc.depth_margin = get_or<double>(g, "depth_margin", gc.depth_margin, "grasp");
    gc.lift_height = get_or<double>(g, "lift_height", gc.lift_height, "grasp");
    gc.lift_joint = get_or<std::string>(g, "lift_joint", gc.lift_joint, "grasp");
    gc.wrist_joint = get_or<std::string>(g, "wrist_joint", gc.wrist_joint, "grasp");
    gc.slip_attempts = get_or<int>(g, "slip_attempts", gc.slip_attempts, "grasp");
    gc.slip_factor = get_or<double>(g, "slip_factor", gc.slip_factor, "grasp");
    config.fine = parse_servo(require(g, "fine", "grasp"), config.scene, base_dir, "grasp.fine");
  } else {
    config.fine = config.servo;
  }
  config.grasp.gripper.model = config.scene.camera(config.fine.camera).model;
  config.grasp.validate();

  if (const YAML::Node trials = root["trials"]) {
    std::size_t i = 0;
    for (const auto& t : trials) {
      const std::string where = "trials[" + std::to_string(i) + "]";
      TrialSpec spec;
      spec.object = as<std::string>(require(t, "object", where), where + ".object");
      if (!config.scene.scene.contains(spec.object)) {
        throw Error(ErrorKind::ConfigError, where + ": object '" + spec.object + "' is not in the scene");
      }
      spec.item = get_or<std::string>(t, "item", spec.object, where);
      spec.height = get_or<double>(t, "height", 0.0, where);
      if (const YAML::Node pos = t["position"]) spec.position = parse_position(pos, where + ".position");
      spec.noise = parse_noise(t["noise"] ? t["noise"] : root["noise"], config.seed + 1000 * (i + 1),
                               where + ".noise");
      spec.grasp = get_or<bool>(t, "grasp", false, where);
      config.trials.push_back(std::move(spec));
      ++i;
    }
  }
  if (config.kind == ExperimentKind::TrialSuite && config.trials.empty()) {
    throw Error(ErrorKind::ConfigError, "trial_suite needs at least one entry under 'trials'");
  }
  return config;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), std::filesystem::absolute(path).parent_path());
}

void override_seed(ScenarioConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.noise.seed = seed;
  for (std::size_t i = 0; i < config.trials.size(); ++i) config.trials[i].noise.seed = seed + 1000 * (i + 1);
}

}  // namespace segservo
