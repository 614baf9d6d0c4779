#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace segservo {

// Rigid transform mapping child-frame coordinates into the parent frame.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Eigen::Vector3d& t) { return {Eigen::Matrix3d::Identity(), t}; }
  // Fixed-axis roll/pitch/yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static Pose from_xyz_rpy(const Eigen::Vector3d& xyz, const Eigen::Vector3d& rpy);

  Pose operator*(const Pose& child) const {
    return {rotation * child.rotation, rotation * child.translation + translation};
  }
  Eigen::Vector3d apply(const Eigen::Vector3d& point) const { return rotation * point + translation; }
  Pose inverse() const {
    const Eigen::Matrix3d rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  // Projects the rotation back onto SO(3) (polar decomposition).
  Pose orthonormalized() const;
};

Eigen::Matrix3d rotation_about(const Eigen::Vector3d& unit_axis, double angle);

// Orthonormal within tolerance and determinant +1.
bool is_proper_rotation(const Eigen::Matrix3d& r, double tolerance = 1e-9);

}  // namespace segservo
