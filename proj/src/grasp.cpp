#include "segservo/grasp.hpp"

#include <algorithm>
#include <cmath>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

void GripperTemplate::validate() const {
  model.validate();
  if (!(z_gripper > 0.0)) throw Error(ErrorKind::ConfigError, "z_gripper must be positive");
  if (!(max_width > 0.0) || !(finger_width > 0.0) || !(finger_length > 0.0)) {
    throw Error(ErrorKind::ConfigError, "gripper dimensions must be positive");
  }
  if (!std::isfinite(center_x) || !std::isfinite(center_y)) {
    throw Error(ErrorKind::ConfigError, "gripper center must be finite");
  }
}

BinaryMask GripperTemplate::mask(double roll) const {
  BinaryMask out(model.width, model.height);
  const double half_open = 0.5 * max_width;
  const double outer = half_open + finger_width;
  const double half_length = 0.5 * finger_length;
  const Eigen::Vector2d opening(-std::sin(roll), std::cos(roll));
  const Eigen::Vector2d across(std::cos(roll), std::sin(roll));

  // Pixel window covering both pads at any roll.
  const double reach = std::hypot(outer, half_length) * model.focal_px / z_gripper + 2.0;
  const double cu = model.principal_x + model.focal_px * center_x / z_gripper;
  const double cv = model.principal_y + model.focal_px * center_y / z_gripper;
  const int u0 = std::max(0, static_cast<int>(std::floor(cu - reach)));
  const int u1 = std::min(model.width - 1, static_cast<int>(std::ceil(cu + reach)));
  const int v0 = std::max(0, static_cast<int>(std::floor(cv - reach)));
  const int v1 = std::min(model.height - 1, static_cast<int>(std::ceil(cv + reach)));

  bool any = false;
  for (int v = v0; v <= v1; ++v) {
    for (int u = u0; u <= u1; ++u) {
      const Eigen::Vector2d p((u - model.principal_x) / model.focal_px * z_gripper - center_x,
                              (v - model.principal_y) / model.focal_px * z_gripper - center_y);
      const double a = std::abs(p.dot(opening));
      const double b = std::abs(p.dot(across));
      if (a >= half_open && a <= outer && b <= half_length) {
        out.set(u, v, true);
        any = true;
      }
    }
  }
  if (!any) throw Error(ErrorKind::InvalidArgument, "gripper template falls outside the image");
  return out;
}

double grasp_standoff(double z_object_hat, double z_gripper) { return z_object_hat + z_gripper; }

GraspPlan select_wrist_rotation(const BinaryMask& object, const GripperTemplate& gripper, double grid_step) {
  if (!(grid_step > 0.0) || grid_step > std::numbers::pi / 8.0 + 1e-15) {
    throw Error(ErrorKind::InvalidArgument, "roll grid step must lie in (0, pi/8]");
  }
  if (object.none()) throw Error(ErrorKind::EmptyMask, "object mask is empty");
  GraspPlan best;
  bool have = false;
  for (int k = 0;; ++k) {
    const double roll = k * grid_step;
    if (roll >= std::numbers::pi) break;
    const double score = jaccard(object, gripper.mask(roll));
    if (!have || score < best.score) {
      best.wrist_roll = roll;
      best.score = score;
      have = true;
    }
  }
  return best;
}

bool grasp_check(double s_A_grasp, double s_A_raised, double factor) {
  if (s_A_grasp == 0.0) throw Error(ErrorKind::InvalidBaseline, "grasp-time area is zero");
  if (s_A_grasp < 0.0 || s_A_raised < 0.0) throw Error(ErrorKind::InvalidArgument, "areas must be non-negative");
  return s_A_raised > factor * s_A_grasp;
}

void GraspConfig::validate() const {
  gripper.validate();
  if (!(grid_step > 0.0) || grid_step > std::numbers::pi / 8.0 + 1e-15) {
    throw Error(ErrorKind::ConfigError, "roll grid step must lie in (0, pi/8]");
  }
  if (!(check_factor > 0.0 && check_factor < 1.0)) {
    throw Error(ErrorKind::ConfigError, "grasp check factor must lie in (0, 1)");
  }
  if (retries < 0) throw Error(ErrorKind::ConfigError, "retries must be non-negative");
  if (!(capture_radius > 0.0) || !(depth_margin > 0.0)) {
    throw Error(ErrorKind::ConfigError, "capture radius and depth margin must be positive");
  }
  if (!(lift_height > 0.0)) throw Error(ErrorKind::ConfigError, "lift height must be positive");
  if (slip_attempts < 0 || !(slip_factor >= 0.0 && slip_factor <= 1.0)) {
    throw Error(ErrorKind::ConfigError, "slip fault parameters out of range");
  }
}

const char* to_string(GraspStatus status) {
  switch (status) {
    case GraspStatus::Succeeded: return "succeeded";
    case GraspStatus::GraspFailed: return "grasp_failed";
    case GraspStatus::ObjectLost: return "object_lost";
  }
  return "unknown";
}

namespace {

struct Session {
  const KinematicChain& chain;
  const SimulatedSegmenter& segmenter;
  GraspOutcome& outcome;
  std::uint64_t frame = 0;
  std::int64_t step = 0;
  int updates = 0;

  EpisodeResult servo(const ServoConfig& config, const PseudoJacobian& jacobian, const JointState& q,
                      int max_steps, const Eigen::Vector3d& object_position) {
    EpisodeOptions options;
    options.max_steps = max_steps;
    options.first_frame = frame;
    options.first_step = step;
    options.updates_so_far = updates;
    options.object_position = object_position;
    EpisodeResult r = servo_episode(chain, segmenter, config, jacobian, q, options);
    absorb(r.log, r.next_frame, r.next_step, r.updates_applied);
    return r;
  }

  void absorb(const TrajectoryLog& log, std::uint64_t next_frame, std::int64_t next_step, int applied) {
    if (outcome.log.records.empty()) {
      outcome.log = log;
    } else {
      outcome.log.append(log);
    }
    frame = next_frame;
    step = next_step;
    updates += applied;
  }

  BinaryMask look(const JointState& q) { return segmenter.segment(forward_kinematics(chain, q), frame++); }
};

}  // namespace

GraspOutcome grasp_pipeline(Scene& scene, const KinematicChain& chain, const CameraModel& model,
                            const std::string& object_id, const GraspPipelineConfig& config, JointState start) {
  config.grasp.validate();
  config.approach.validate();
  config.noise.validate();
  const JointDescriptor* lift = chain.find(config.grasp.lift_joint);
  if (!lift) throw Error(ErrorKind::ConfigError, "lift joint '" + config.grasp.lift_joint + "' is not in the chain");
  if (!chain.find(config.grasp.wrist_joint)) {
    throw Error(ErrorKind::ConfigError, "wrist joint '" + config.grasp.wrist_joint + "' is not in the chain");
  }

  GraspOutcome outcome;
  const SceneObject original = scene.object(object_id);
  outcome.z_object_true = reference_depth_z(original);
  const Eigen::Vector3d object_position = original.pose.translation;
  const SimulatedSegmenter segmenter(scene, model, object_id, config.noise);
  Session session{chain, segmenter, outcome};

  const auto finish = [&](GraspStatus status, std::string reason, JointState q) {
    outcome.status = status;
    outcome.reason = std::move(reason);
    outcome.final_q = std::move(q);
    return outcome;
  };

  EpisodeResult coarse =
      session.servo(config.center, config.center_jacobian, start, config.max_steps, object_position);
  if (coarse.status == EpisodeStatus::ObjectLost) {
    return finish(GraspStatus::ObjectLost, "object lost while centering", coarse.final_q);
  }
  outcome.centered = coarse.status == EpisodeStatus::Converged;
  if (!outcome.centered) return finish(GraspStatus::GraspFailed, "centering did not converge", coarse.final_q);

  EpisodeOptions approach_options;
  approach_options.first_frame = session.frame;
  approach_options.first_step = session.step;
  approach_options.updates_so_far = session.updates;
  approach_options.object_position = object_position;
  ApproachConfig approach_config = config.approach;
  approach_config.lift_joint = config.grasp.lift_joint;
  outcome.approach = approach_depth(chain, segmenter, config.center, coarse.jacobian, coarse.final_q,
                                    approach_config, approach_options);
  const ApproachResult& approach = outcome.approach;
  session.absorb(approach.log, approach.next_frame, approach.next_step, 0);
  if (approach.status == EpisodeStatus::ObjectLost) {
    return finish(GraspStatus::ObjectLost, "object lost during the approach", approach.final_q);
  }
  if (approach.final_estimate) outcome.z_object_hat = approach.final_estimate->z_object_hat;
  if (!approach.converged) {
    return finish(GraspStatus::GraspFailed, "depth estimate did not converge", approach.final_q);
  }

  const double z_hat = *outcome.z_object_hat;
  outcome.z_camera_grasp = grasp_standoff(z_hat, config.grasp.gripper.z_gripper);
  JointState q = approach.final_q;
  {
    const double z_camera = forward_kinematics(chain, q).translation.z();
    const double target = q.at(config.grasp.lift_joint) + (outcome.z_camera_grasp - z_camera);
    if (target < lift->lower || target > lift->upper) {
      return finish(GraspStatus::GraspFailed, "standoff height outside the lift range", q);
    }
    q.set(config.grasp.lift_joint, target);
  }

  const double depth_error = std::abs(z_hat - outcome.z_object_true);
  PseudoJacobian fine_jacobian = config.fine_jacobian;
  int slips = 0;
  for (int attempt = 1; attempt <= 1 + config.grasp.retries; ++attempt) {
    GraspAttempt row;
    row.attempt = attempt;
    q.set(config.grasp.wrist_joint, 0.0);

    EpisodeResult fine = session.servo(config.fine, fine_jacobian, q, config.max_steps, object_position);
    fine_jacobian = fine.jacobian;
    q = fine.final_q;
    if (fine.status == EpisodeStatus::ObjectLost) {
      outcome.attempts.push_back(row);
      return finish(GraspStatus::ObjectLost, "object lost during the grasp servo", q);
    }
    outcome.final_error_norm = fine.log.records.back().error.norm();
    if (fine.status != EpisodeStatus::Converged) row.note = "grasp servo did not converge";

    const GraspPlan plan = select_wrist_rotation(session.look(q), config.grasp.gripper, config.grasp.grid_step);
    row.wrist_roll = plan.wrist_roll;
    row.jaccard = plan.score;
    q.set(config.grasp.wrist_joint, plan.wrist_roll);

    row.s_A_grasp = area(session.look(q));
    if (row.s_A_grasp == 0) {
      outcome.attempts.push_back(row);
      return finish(GraspStatus::ObjectLost, "object not visible at the grasp pose", q);
    }

    const Pose camera = forward_kinematics(chain, q);
    const Eigen::Vector3d fingertip =
        camera.apply({config.grasp.gripper.center_x, config.grasp.gripper.center_y, config.grasp.gripper.z_gripper});
    row.planar_error = (fingertip.head<2>() - object_position.head<2>()).norm();
    row.captured = row.planar_error < config.grasp.capture_radius && depth_error <= config.grasp.depth_margin;

    JointState raised = q;
    const double lifted = std::min(q.at(config.grasp.lift_joint) + config.grasp.lift_height, lift->upper);
    raised.set(config.grasp.lift_joint, lifted);
    const double rise = lifted - q.at(config.grasp.lift_joint);
    const bool slipped = row.captured && slips < config.grasp.slip_attempts;
    if (row.captured) {
      Pose carried = original.pose;
      carried.translation.z() += rise;
      scene.set_pose(object_id, carried);
    }
    const std::int64_t measured = area(session.look(raised));
    scene.set_pose(object_id, original.pose);
    if (slipped) {
      ++slips;
      row.s_A_raised = std::llround(config.grasp.slip_factor * static_cast<double>(measured));
      row.note = "slip";
    } else {
      row.s_A_raised = measured;
      if (row.captured) {
        Pose carried = original.pose;
        carried.translation.z() += rise;
        scene.set_pose(object_id, carried);
      }
    }

    row.success = grasp_check(static_cast<double>(row.s_A_grasp), static_cast<double>(row.s_A_raised),
                              config.grasp.check_factor);
    outcome.attempts.push_back(row);
    if (row.success) return finish(GraspStatus::Succeeded, "", raised);
  }
  return finish(GraspStatus::GraspFailed, "grasp check failed on every attempt", q);
}

CsvTable attempts_csv(const std::vector<GraspAttempt>& attempts) {
  CsvTable table;
  table.header = {"attempt", "wrist_roll", "jaccard", "s_A_grasp", "s_A_raised", "success"};
  for (const auto& a : attempts) {
    table.rows.push_back({std::to_string(a.attempt), format_double(a.wrist_roll), format_double(a.jaccard),
                          std::to_string(a.s_A_grasp), std::to_string(a.s_A_raised), a.success ? "1" : "0"});
  }
  return table;
}

}  // namespace segservo
