#pragma once

// Shared YAML helpers for the config loaders; private to the library.

#include <yaml-cpp/yaml.h>

#include <Eigen/Core>
#include <string>
#include <vector>

#include "segservo/error.hpp"
#include "segservo/geometry.hpp"

namespace segservo::detail {

inline YAML::Node require(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node child = node[key];
  if (!child) throw Error(ErrorKind::ConfigError, where + ": missing key '" + key + "'");
  return child;
}

template <class T>
T as(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::ConfigError, where + ": " + e.what());
  }
}

template <class T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& where) {
  const YAML::Node child = node[key];
  if (!child) return fallback;
  return as<T>(child, where + "." + key);
}

inline Eigen::Vector3d as_vec3(const YAML::Node& node, const std::string& where) {
  const auto values = as<std::vector<double>>(node, where);
  if (values.size() != 3) throw Error(ErrorKind::ConfigError, where + ": expected 3 numbers");
  return {values[0], values[1], values[2]};
}

// {xyz: [..], rpy: [..]}, both optional.
inline Pose as_pose(const YAML::Node& node, const std::string& where) {
  if (!node) return Pose::identity();
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
  if (node["xyz"]) xyz = as_vec3(node["xyz"], where + ".xyz");
  if (node["rpy"]) rpy = as_vec3(node["rpy"], where + ".rpy");
  return Pose::from_xyz_rpy(xyz, rpy);
}

inline YAML::Node load_yaml_text(const std::string& text, const std::string& where) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::ConfigError, where + ": " + e.what());
  }
}

}  // namespace segservo::detail
