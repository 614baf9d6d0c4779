#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segservo/geometry.hpp"

namespace segservo {

enum class JointKind { Revolute, Prismatic };

struct JointDescriptor {
  std::string name;
  JointKind kind = JointKind::Revolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  // Fixed offset from the previous link, applied before this joint's motion.
  Pose origin;
  double lower = 0.0;
  double upper = 0.0;
};

// Ordered joints from the world frame out to the camera. Values are radians
// for revolute joints and meters for prismatic ones.
class KinematicChain {
 public:
  KinematicChain() = default;
  explicit KinematicChain(std::vector<JointDescriptor> joints, Pose camera_mount = Pose::identity());

  const std::vector<JointDescriptor>& joints() const noexcept { return joints_; }
  const Pose& camera_mount() const noexcept { return camera_mount_; }
  const JointDescriptor* find(std::string_view name) const;

 private:
  std::vector<JointDescriptor> joints_;
  Pose camera_mount_;
};

// Named actuator values; insertion order is preserved.
class JointState {
 public:
  JointState() = default;
  JointState(std::initializer_list<std::pair<std::string, double>> values);

  void set(std::string_view name, double value);
  std::optional<double> find(std::string_view name) const;
  double at(std::string_view name) const;  // throws MissingJoint
  bool contains(std::string_view name) const { return find(name).has_value(); }

  const std::vector<std::pair<std::string, double>>& entries() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const JointState&, const JointState&) = default;

 private:
  std::vector<std::pair<std::string, double>> values_;
};

// Camera pose in the world frame. Throws MissingJoint or LimitViolation.
Pose forward_kinematics(const KinematicChain& chain, const JointState& q);

struct ClampResult {
  JointState state;
  std::vector<std::string> clamped;  // joints that hit a limit
};

// Closed-loop use: saturate chain joints at their limits instead of failing.
ClampResult clamp_to_limits(const KinematicChain& chain, const JointState& q);

}  // namespace segservo
