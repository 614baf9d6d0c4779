#include "segservo/servo.hpp"

#include <cmath>

#include "segservo/error.hpp"

namespace segservo {

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double v = entries_.data()[i];
    if (v != 0.0 && v != 1.0) throw Error(ErrorKind::InvalidArgument, "coupling entries must be 0 or 1");
  }
}

CouplingMatrix CouplingMatrix::zeros(int joints, int features) {
  return CouplingMatrix(Eigen::MatrixXd::Zero(joints, features));
}

CouplingMatrix CouplingMatrix::ones(int joints, int features) {
  return CouplingMatrix(Eigen::MatrixXd::Ones(joints, features));
}

bool CouplingMatrix::all_features_controllable() const {
  for (int j = 0; j < cols(); ++j) {
    if (entries_.col(j).sum() == 0.0) return false;
  }
  return true;
}

PseudoJacobian::PseudoJacobian(std::vector<std::string> joints, Eigen::MatrixXd values)
    : joints_(std::move(joints)), values_(std::move(values)) {
  if (static_cast<Eigen::Index>(joints_.size()) != values_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "one joint name per Jacobian row");
  }
  if (!values_.allFinite()) throw Error(ErrorKind::InvalidArgument, "Jacobian entries must be finite");
}

bool PseudoJacobian::gated_by(const CouplingMatrix& coupling) const {
  if (coupling.rows() != rows() || coupling.cols() != cols()) return false;
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j < cols(); ++j) {
      if (!coupling(i, j) && values_(i, j) != 0.0) return false;
    }
  }
  return true;
}

void ServoConfig::validate(const CameraModel& model) const {
  if (!(gain > 0.0)) throw Error(ErrorKind::ConfigError, "servo gain must be positive");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::ConfigError, "update speed alpha must be non-negative");
  if (!(tolerance_px > 0.0)) throw Error(ErrorKind::ConfigError, "convergence tolerance must be positive");
  if (!(singular_epsilon >= 0.0)) throw Error(ErrorKind::ConfigError, "singularity threshold must be non-negative");
  if (!(target.s_x >= 0.0 && target.s_x < model.width && target.s_y >= 0.0 && target.s_y < model.height)) {
    throw Error(ErrorKind::ConfigError, "target features lie outside the image");
  }
  if (coupling.rows() != static_cast<int>(joints.size()) || coupling.cols() != kFeatureCount) {
    throw Error(ErrorKind::ConfigError, "coupling matrix must be (controlled joints) x 2");
  }
  if (!coupling.all_features_controllable()) {
    throw Error(ErrorKind::ConfigError, "every feature needs at least one coupled joint");
  }
}

Eigen::Vector2d feature_error(const FeatureVector& s, const FeatureVector& target) {
  return {s.s_x - target.s_x, s.s_y - target.s_y};
}

Eigen::VectorXd control_step(const PseudoJacobian& jacobian, const Eigen::VectorXd& error, double gain) {
  if (error.size() != jacobian.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "error length does not match Jacobian columns");
  }
  return -gain * (jacobian.values() * error);
}

JointState apply_delta(const JointState& q, const std::vector<std::string>& joints, const Eigen::VectorXd& delta) {
  if (delta.size() != static_cast<Eigen::Index>(joints.size())) {
    throw Error(ErrorKind::DimensionMismatch, "one delta per controlled joint");
  }
  JointState out = q;
  for (std::size_t i = 0; i < joints.size(); ++i) out.set(joints[i], q.at(joints[i]) + delta[static_cast<Eigen::Index>(i)]);
  return out;
}

HbUpdateResult hb_update(const PseudoJacobian& jacobian, const Eigen::VectorXd& delta_q,
                         const Eigen::VectorXd& delta_e, double alpha, const CouplingMatrix& coupling,
                         double epsilon) {
  const Eigen::MatrixXd& j = jacobian.values();
  if (delta_q.size() != j.rows() || delta_e.size() != j.cols() || coupling.rows() != j.rows() ||
      coupling.cols() != j.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "hb_update operand sizes disagree");
  }
  HbUpdateResult result{jacobian, false, 0.0};

  const Eigen::VectorXd j_de = j * delta_e;
  const double denominator = delta_q.dot(j_de);
  const double scale = delta_q.norm() * j.norm() * delta_e.norm();
  if (!std::isfinite(denominator) || !std::isfinite(scale) || scale == 0.0) return result;
  result.normalized_denominator = std::abs(denominator) / scale;
  if (!(result.normalized_denominator >= epsilon)) return result;

  const Eigen::RowVectorXd dq_j = delta_q.transpose() * j;
  const Eigen::MatrixXd correction = ((delta_q - j_de) * dq_j / denominator).cwiseProduct(coupling.entries());
  Eigen::MatrixXd updated = j + alpha * correction;
  if (!updated.allFinite()) return result;

  result.jacobian = PseudoJacobian(jacobian.joints(), std::move(updated));
  result.applied = true;
  return result;
}

PseudoJacobian init_pseudojacobian(const CouplingMatrix& coupling, std::vector<std::string> joints,
                                   double seed_value) {
  return PseudoJacobian(std::move(joints), seed_value * coupling.entries());
}

bool converged(const Eigen::VectorXd& error, double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  return error.norm() <= tolerance;
}

namespace {

// Couplings listed as (joint, feature index).
ServoPreset make_preset(std::string name, std::string camera, std::vector<std::string> joints,
                        std::vector<std::pair<int, int>> couplings, FeatureVector target) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(joints.size()), kFeatureCount);
  for (const auto& [row, feature] : couplings) h(row, feature) = 1.0;
  return {std::move(name), std::move(camera), std::move(joints), CouplingMatrix(h), target};
}

}  // namespace

ServoPreset servo_preset(std::string_view name) {
  constexpr FeatureVector center{320.0, 240.0};
  if (name == "head") return make_preset("head", "head", {"head_pan", "head_tilt"}, {{0, 0}, {1, 1}}, center);
  if (name == "arm_lift") {
    return make_preset("arm_lift", "grasp", {"arm_lift", "arm_roll"}, {{0, 0}, {1, 1}}, center);
  }
  if (name == "arm_wrist") {
    return make_preset("arm_wrist", "grasp", {"wrist_flex", "arm_roll"}, {{0, 0}, {1, 1}}, center);
  }
  if (name == "arm_both") {
    return make_preset("arm_both", "grasp", {"wrist_flex", "arm_lift", "arm_roll"}, {{0, 0}, {1, 0}, {2, 1}},
                       center);
  }
  if (name == "base") {
    return make_preset("base", "grasp", {"base_forward", "base_lateral"}, {{0, 0}, {1, 1}}, center);
  }
  if (name == "base_grasp") {
    return make_preset("base_grasp", "grasp", {"base_forward", "base_lateral"}, {{0, 0}, {1, 1}}, {220.0, 240.0});
  }
  throw Error(ErrorKind::ConfigError, "unknown servo preset '" + std::string(name) + "'");
}

std::vector<std::string> servo_preset_names() {
  return {"head", "arm_lift", "arm_wrist", "arm_both", "base", "base_grasp"};
}

}  // namespace segservo
