#include "segservo/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "segservo/error.hpp"

namespace segservo {

KinematicChain::KinematicChain(std::vector<JointDescriptor> joints, Pose camera_mount)
    : joints_(std::move(joints)), camera_mount_(std::move(camera_mount)) {
  std::set<std::string> names;
  for (const auto& joint : joints_) {
    if (!names.insert(joint.name).second) {
      throw Error(ErrorKind::ConfigError, "duplicate joint name '" + joint.name + "'");
    }
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9) {
      throw Error(ErrorKind::ConfigError, "joint '" + joint.name + "' axis is not unit length");
    }
    if (!(joint.lower <= joint.upper)) {
      throw Error(ErrorKind::ConfigError, "joint '" + joint.name + "' has lower limit above upper");
    }
    if (!is_proper_rotation(joint.origin.rotation)) {
      throw Error(ErrorKind::ConfigError, "joint '" + joint.name + "' origin is not a rotation");
    }
  }
}

const JointDescriptor* KinematicChain::find(std::string_view name) const {
  for (const auto& joint : joints_) {
    if (joint.name == name) return &joint;
  }
  return nullptr;
}

JointState::JointState(std::initializer_list<std::pair<std::string, double>> values) {
  for (const auto& [name, value] : values) set(name, value);
}

void JointState::set(std::string_view name, double value) {
  for (auto& entry : values_) {
    if (entry.first == name) {
      entry.second = value;
      return;
    }
  }
  values_.emplace_back(std::string(name), value);
}

std::optional<double> JointState::find(std::string_view name) const {
  for (const auto& entry : values_) {
    if (entry.first == name) return entry.second;
  }
  return std::nullopt;
}

double JointState::at(std::string_view name) const {
  if (auto value = find(name)) return *value;
  throw Error(ErrorKind::MissingJoint, "no value for joint '" + std::string(name) + "'");
}

Pose forward_kinematics(const KinematicChain& chain, const JointState& q) {
  Pose pose;
  for (const auto& joint : chain.joints()) {
    const double value = q.at(joint.name);
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::InvalidArgument, "joint '" + joint.name + "' value is not finite");
    }
    if (value < joint.lower || value > joint.upper) {
      throw Error(ErrorKind::LimitViolation, "joint '" + joint.name + "' outside its limits");
    }
    Pose motion;
    if (joint.kind == JointKind::Revolute) {
      motion.rotation = rotation_about(joint.axis, value);
    } else {
      motion.translation = joint.axis * value;
    }
    pose = pose * joint.origin * motion;
  }
  return (pose * chain.camera_mount()).orthonormalized();
}

ClampResult clamp_to_limits(const KinematicChain& chain, const JointState& q) {
  ClampResult result{q, {}};
  for (const auto& joint : chain.joints()) {
    const auto value = q.find(joint.name);
    if (!value) continue;
    const double clamped = std::clamp(*value, joint.lower, joint.upper);
    if (clamped != *value) {
      result.state.set(joint.name, clamped);
      result.clamped.push_back(joint.name);
    }
  }
  return result;
}

}  // namespace segservo
