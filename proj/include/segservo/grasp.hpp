#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "segservo/approach.hpp"
#include "segservo/camera.hpp"
#include "segservo/mask.hpp"
#include "segservo/perception.hpp"
#include "segservo/scene.hpp"

namespace segservo {

// Two parallel finger pads seen from the grasp camera, back-projected onto
// the plane z = z_gripper in front of the camera. At roll 0 the opening axis
// is the image y axis; roll rotates it about the fingertip center, from
// image +y toward image -x.
struct GripperTemplate {
  CameraModel model;
  double z_gripper = 0.25;        // camera to closed fingertip along the optical axis, meters
  double center_x = -0.0625;      // closed fingertip center in the camera frame, meters
  double center_y = 0.0;
  double max_width = 0.135;       // inner face separation when fully open
  double finger_width = 0.02;     // pad thickness along the opening axis
  double finger_length = 0.03;    // pad extent across the opening axis

  void validate() const;  // throws ConfigError
  // Throws InvalidArgument if no pixel of either pad falls inside the image.
  BinaryMask mask(double roll) const;
};

struct GraspPlan {
  double wrist_roll = 0.0;  // radians in [0, pi)
  double score = 0.0;       // Jaccard index of object and template at wrist_roll
  double z_camera_grasp = 0.0;
};

// Camera height at which the closed fingertips reach the object.
double grasp_standoff(double z_object_hat, double z_gripper);

inline constexpr double kDefaultRollStep = std::numbers::pi / 36.0;

// Grid search over {0, step, 2 step, ...} in [0, pi) for the smallest Jaccard
// index; ties go to the smaller angle. Throws EmptyMask, InvalidArgument
// (step outside (0, pi/8]).
GraspPlan select_wrist_rotation(const BinaryMask& object, const GripperTemplate& gripper,
                                double grid_step = kDefaultRollStep);

// s_A_raised > factor * s_A_grasp. Throws InvalidBaseline for a zero baseline.
bool grasp_check(double s_A_grasp, double s_A_raised, double factor = 0.5);

struct GraspConfig {
  GripperTemplate gripper;
  double grid_step = kDefaultRollStep;
  double check_factor = 0.5;
  int retries = 2;
  double capture_radius = 0.02;  // meters, fingertip center to object center in the plane
  double depth_margin = 0.01;    // meters, allowed |z_hat - z_true|
  double lift_height = 0.15;
  std::string lift_joint = "arm_lift";
  std::string wrist_joint = "wrist_roll";
  // Fault injection: the first slip_attempts captured grasps lose the object
  // during the lift and the raised area is scaled by slip_factor.
  int slip_attempts = 0;
  double slip_factor = 0.4;

  void validate() const;  // throws ConfigError
};

struct GraspAttempt {
  int attempt = 0;
  double wrist_roll = 0.0;
  double jaccard = 0.0;
  std::int64_t s_A_grasp = 0;
  std::int64_t s_A_raised = 0;
  bool success = false;
  bool captured = false;  // ground truth: fingers closed on the object
  double planar_error = 0.0;
  std::string note;
};

enum class GraspStatus { Succeeded, GraspFailed, ObjectLost };
const char* to_string(GraspStatus status);

struct GraspPipelineConfig {
  ServoConfig center;  // coarse centering and approach re-centering
  PseudoJacobian center_jacobian;
  ServoConfig fine;    // grasp-point servo at the standoff height
  PseudoJacobian fine_jacobian;
  ApproachConfig approach;
  GraspConfig grasp;
  NoiseModel noise;
  int max_steps = 50;
};

struct GraspOutcome {
  GraspStatus status = GraspStatus::GraspFailed;
  std::string reason;
  bool centered = false;  // coarse servo reached tolerance
  ApproachResult approach;
  std::optional<double> z_object_hat;
  double z_object_true = 0.0;
  double z_camera_grasp = 0.0;
  double final_error_norm = 0.0;  // after the last fine servo
  std::vector<GraspAttempt> attempts;
  TrajectoryLog log;
  JointState final_q;
};

// Center, approach with depth estimation, descend to the standoff, servo to
// the grasp point, pick the wrist roll, close, lift and check; regrasp on a
// failed check. The scene is modified: a captured object follows the lift.
GraspOutcome grasp_pipeline(Scene& scene, const KinematicChain& chain, const CameraModel& model,
                            const std::string& object_id, const GraspPipelineConfig& config, JointState start);

CsvTable attempts_csv(const std::vector<GraspAttempt>& attempts);

}  // namespace segservo
