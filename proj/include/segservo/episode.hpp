#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "segservo/csv.hpp"
#include "segservo/kinematics.hpp"
#include "segservo/perception.hpp"
#include "segservo/servo.hpp"

namespace segservo {

namespace event {
inline constexpr const char* kUpdateSkipped = "update_skipped";
inline constexpr const char* kLimitClamp = "limit_clamp";
inline constexpr const char* kObjectLost = "object_lost";
inline constexpr const char* kReset = "reset";
}  // namespace event

struct TrajectoryRecord {
  std::int64_t step = 0;
  int placement = 0;
  std::uint64_t frame = 0;
  JointState q;
  Eigen::Vector3d object_position = Eigen::Vector3d::Zero();
  bool visible = false;
  std::int64_t area = 0;
  FeatureVector s;        // meaningful only when visible
  Eigen::Vector2d error = Eigen::Vector2d::Zero();
  int jacobian_version = 0;  // number of applied updates before this record
  std::vector<std::string> events;
};

struct TrajectoryLog {
  std::vector<std::string> joint_names;  // column order for q
  FeatureVector target;
  std::vector<TrajectoryRecord> records;

  void append(const TrajectoryLog& other);
};

// step,placement,frame,q_<joint>...,object_x,object_y,object_z,visible,s_A,
// s_x,s_y,e_x,e_y,e_norm,jacobian_version,events
CsvTable to_csv(const TrajectoryLog& log);
TrajectoryLog trajectory_from_csv(const CsvTable& table, const FeatureVector& target);

// One snapshot per attempted Jacobian update.
struct ParameterSample {
  int update_index = 0;
  std::int64_t step = 0;
  bool applied = false;
  double normalized_denominator = 0.0;
  Eigen::MatrixXd values;
};

// update,step,applied,normalized_denominator,<joint>/<feature>... for coupled entries.
CsvTable parameter_trace_csv(const std::vector<ParameterSample>& samples, const PseudoJacobian& layout,
                             const CouplingMatrix& coupling);

enum class EpisodeStatus { Converged, MaxSteps, ObjectLost };
const char* to_string(EpisodeStatus status);

struct EpisodeOptions {
  int max_steps = 50;
  std::int64_t first_step = 0;
  std::uint64_t first_frame = 0;
  int placement = 0;
  int updates_so_far = 0;
  Eigen::Vector3d object_position = Eigen::Vector3d::Zero();  // logged for replay
  std::vector<std::string> logged_joints;                     // defaults to the chain's joints
};

struct EpisodeResult {
  EpisodeStatus status = EpisodeStatus::MaxSteps;
  TrajectoryLog log;
  PseudoJacobian jacobian;
  JointState final_q;
  std::vector<ParameterSample> updates;
  std::uint64_t next_frame = 0;
  std::int64_t next_step = 0;
  int updates_applied = 0;
  bool saturated = false;  // a controlled joint ended at a limit
};

// Closed loop: segment, features, error, control step, move (clamped to
// joint limits), then one Hadamard-Broyden update from the achieved dq and
// measured de when alpha > 0. Stops on convergence, max_steps or object loss.
EpisodeResult servo_episode(const KinematicChain& chain, const SegmentationSource& segmenter,
                            const ServoConfig& config, PseudoJacobian jacobian, JointState start,
                            const EpisodeOptions& options);

}  // namespace segservo
