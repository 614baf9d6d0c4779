#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "segservo/camera.hpp"
#include "segservo/kinematics.hpp"
#include "segservo/scene.hpp"

namespace segservo {

// A robot camera: the chain that carries it plus its intrinsics.
struct CameraRig {
  KinematicChain chain;
  CameraModel model;
};

struct SceneDescription {
  Scene scene;
  std::map<std::string, CameraRig> cameras;
  JointState home;

  const CameraRig& camera(const std::string& name) const;  // throws ConfigError
};

// Structured text (YAML) scene file; see data/scenes/hsr_like.yaml.
SceneDescription load_scene_file(const std::filesystem::path& path);
SceneDescription parse_scene(const std::string& text);

}  // namespace segservo
