#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segservo/camera.hpp"
#include "segservo/kinematics.hpp"
#include "segservo/mask.hpp"

namespace segservo {

inline constexpr int kFeatureCount = 2;  // (s_x, s_y)
inline constexpr double kDefaultJacobianSeed = 0.001;

// Logical n x k matrix: entry (i, j) is 1 iff joint i may respond to feature j.
class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  explicit CouplingMatrix(Eigen::MatrixXd entries);  // entries must be 0 or 1

  static CouplingMatrix zeros(int joints, int features);
  static CouplingMatrix ones(int joints, int features);

  int rows() const noexcept { return static_cast<int>(entries_.rows()); }
  int cols() const noexcept { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  bool operator()(int i, int j) const { return entries_(i, j) != 0.0; }

  // Every feature column has at least one coupled joint.
  bool all_features_controllable() const;

  friend bool operator==(const CouplingMatrix& a, const CouplingMatrix& b) { return a.entries_ == b.entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Estimated pseudoinverse feature Jacobian dq/ds, one row per controlled joint.
class PseudoJacobian {
 public:
  PseudoJacobian() = default;
  PseudoJacobian(std::vector<std::string> joints, Eigen::MatrixXd values);

  const std::vector<std::string>& joints() const noexcept { return joints_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }
  int rows() const noexcept { return static_cast<int>(values_.rows()); }
  int cols() const noexcept { return static_cast<int>(values_.cols()); }

  // True when every entry outside the coupling pattern is exactly zero.
  bool gated_by(const CouplingMatrix& coupling) const;

 private:
  std::vector<std::string> joints_;
  Eigen::MatrixXd values_;
};

struct ServoConfig {
  double gain = 1.0;                  // lambda
  double alpha = 0.1;                 // update speed; 0 freezes the Jacobian
  FeatureVector target{320.0, 240.0};  // s*
  std::vector<std::string> joints;    // controlled joints, rows of H and J+
  CouplingMatrix coupling;
  double tolerance_px = 5.0;
  double singular_epsilon = 1e-9;

  void validate(const CameraModel& model) const;  // throws ConfigError
};

// e = s - s*.
Eigen::Vector2d feature_error(const FeatureVector& s, const FeatureVector& target);

// dq = -gain * J+ e. Throws DimensionMismatch.
Eigen::VectorXd control_step(const PseudoJacobian& jacobian, const Eigen::VectorXd& error, double gain);

// q with dq added to the named joints; all other joints keep their values.
JointState apply_delta(const JointState& q, const std::vector<std::string>& joints, const Eigen::VectorXd& delta);

struct HbUpdateResult {
  PseudoJacobian jacobian;
  bool applied = false;  // false: denominator was singular, jacobian unchanged
  double normalized_denominator = 0.0;
};

// Hadamard-Broyden update of the pseudoinverse Jacobian:
//
//   J+ <- J+ + alpha * ((dq - J+ de) dq' J+ / (dq' J+ de)) o H
//
// The update is skipped (J+ returned unchanged) when
// |dq' J+ de| / (|dq| |J+|_F |de|) < epsilon or when anything is non-finite.
HbUpdateResult hb_update(const PseudoJacobian& jacobian, const Eigen::VectorXd& delta_q,
                         const Eigen::VectorXd& delta_e, double alpha, const CouplingMatrix& coupling,
                         double epsilon = 1e-9);

// J+ = seed * H.
PseudoJacobian init_pseudojacobian(const CouplingMatrix& coupling, std::vector<std::string> joints,
                                   double seed_value = kDefaultJacobianSeed);

// |e| <= tolerance. Throws InvalidArgument for tolerance <= 0.
bool converged(const Eigen::VectorXd& error, double tolerance);

// Named actuator-feature couplings.
struct ServoPreset {
  std::string name;
  std::string camera;
  std::vector<std::string> joints;
  CouplingMatrix coupling;
  FeatureVector target;
};

// head, arm_lift, arm_wrist, arm_both, base, base_grasp. Throws ConfigError.
ServoPreset servo_preset(std::string_view name);
std::vector<std::string> servo_preset_names();

}  // namespace segservo
