#include "segservo/scene_config.hpp"

#include <fstream>
#include <sstream>

#include "yaml_util.hpp"

namespace segservo {

using detail::as;
using detail::as_pose;
using detail::as_vec3;
using detail::get_or;
using detail::require;

const CameraRig& SceneDescription::camera(const std::string& name) const {
  const auto it = cameras.find(name);
  if (it == cameras.end()) throw Error(ErrorKind::ConfigError, "scene has no camera '" + name + "'");
  return it->second;
}

namespace {

JointDescriptor parse_joint(const std::string& name, const YAML::Node& node) {
  const std::string where = "joints." + name;
  JointDescriptor joint;
  joint.name = name;
  const auto type = as<std::string>(require(node, "type", where), where + ".type");
  if (type == "revolute") {
    joint.kind = JointKind::Revolute;
  } else if (type == "prismatic") {
    joint.kind = JointKind::Prismatic;
  } else {
    throw Error(ErrorKind::ConfigError, where + ": unknown joint type '" + type + "'");
  }
  joint.axis = as_vec3(require(node, "axis", where), where + ".axis");
  const auto limits = as<std::vector<double>>(require(node, "limits", where), where + ".limits");
  if (limits.size() != 2) throw Error(ErrorKind::ConfigError, where + ".limits: expected [min, max]");
  joint.lower = limits[0];
  joint.upper = limits[1];
  return joint;
}

SceneObject parse_object(const YAML::Node& node, std::size_t index) {
  const std::string where = "objects[" + std::to_string(index) + "]";
  SceneObject object;
  object.id = as<std::string>(require(node, "id", where), where + ".id");
  const auto shape = as<std::string>(require(node, "shape", where), where + ".shape");
  if (shape == "sphere") {
    object.shape = Sphere{as<double>(require(node, "radius", where), where + ".radius")};
  } else if (shape == "box") {
    object.shape = Box{as_vec3(require(node, "half_extents", where), where + ".half_extents")};
  } else if (shape == "disk") {
    Disk disk;
    disk.radius = as<double>(require(node, "radius", where), where + ".radius");
    if (node["normal"]) disk.normal = as_vec3(node["normal"], where + ".normal");
    object.shape = disk;
  } else {
    throw Error(ErrorKind::ConfigError, where + ": unknown shape '" + shape + "'");
  }
  object.pose = as_pose(node["pose"], where + ".pose");
  return object;
}

}  // namespace

SceneDescription parse_scene(const std::string& text) {
  const YAML::Node root = detail::load_yaml_text(text, "scene");
  SceneDescription description;

  std::map<std::string, JointDescriptor> joint_table;
  std::vector<std::string> joint_order;
  for (const auto& entry : require(root, "joints", "scene")) {
    const auto name = as<std::string>(entry.first, "joints");
    if (!joint_table.emplace(name, parse_joint(name, entry.second)).second) {
      throw Error(ErrorKind::ConfigError, "joints: duplicate '" + name + "'");
    }
    joint_order.push_back(name);
  }

  for (const auto& entry : require(root, "cameras", "scene")) {
    const auto name = as<std::string>(entry.first, "cameras");
    const std::string where = "cameras." + name;
    const YAML::Node node = entry.second;

    const YAML::Node intrinsics = require(node, "intrinsics", where);
    CameraModel model;
    model.focal_px = as<double>(require(intrinsics, "focal_px", where), where + ".focal_px");
    model.width = get_or<int>(intrinsics, "width", 640, where);
    model.height = get_or<int>(intrinsics, "height", 480, where);
    model.principal_x = get_or<double>(intrinsics, "principal_x", model.width / 2.0, where);
    model.principal_y = get_or<double>(intrinsics, "principal_y", model.height / 2.0, where);
    model.validate();

    std::vector<JointDescriptor> joints;
    for (const auto& link : require(node, "chain", where)) {
      const auto joint_name = as<std::string>(require(link, "joint", where), where + ".chain.joint");
      const auto it = joint_table.find(joint_name);
      if (it == joint_table.end()) {
        throw Error(ErrorKind::ConfigError, where + ": chain references unknown joint '" + joint_name + "'");
      }
      JointDescriptor joint = it->second;
      joint.origin = as_pose(link["origin"], where + ".chain." + joint_name + ".origin");
      joints.push_back(std::move(joint));
    }
    const Pose mount = as_pose(node["mount"], where + ".mount");
    description.cameras.emplace(name, CameraRig{KinematicChain(std::move(joints), mount), model});
  }

  std::size_t index = 0;
  for (const auto& node : require(root, "objects", "scene")) {
    description.scene.add(parse_object(node, index++));
  }

  for (const auto& name : joint_order) description.home.set(name, 0.0);
  if (const YAML::Node home = root["home"]) {
    for (const auto& entry : home) {
      const auto name = as<std::string>(entry.first, "home");
      if (!joint_table.contains(name)) throw Error(ErrorKind::ConfigError, "home: unknown joint '" + name + "'");
      description.home.set(name, as<double>(entry.second, "home." + name));
    }
  }
  return description;
}

SceneDescription load_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open scene file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scene(buffer.str());
}

}  // namespace segservo
