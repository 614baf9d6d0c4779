#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segservo/approach.hpp"
#include "segservo/episode.hpp"
#include "segservo/grasp.hpp"
#include "segservo/jacobian_io.hpp"
#include "segservo/scenario.hpp"

namespace segservo {

// What a CLI subcommand reports: success maps to exit code 0, failure to 3.
struct ExperimentResult {
  bool success = false;
  std::string summary;
};

struct LearnResult {
  EpisodeStatus status = EpisodeStatus::MaxSteps;
  TrajectoryLog log;
  PseudoJacobian jacobian;
  std::vector<ParameterSample> samples;
  int resets = 0;
  int updates_applied = 0;
};

// Learning runs with alpha > 0 (ConfigError otherwise). Object loss teleports
// the robot back to the start pose and continues from the latest J+, at most
// max_resets times; update_budget caps the total number of update attempts.
LearnResult learn(const ScenarioConfig& config);
ExperimentResult run_learn(const ScenarioConfig& config, const std::filesystem::path& out, bool gnuplot);

enum class PlacementStatus { Converged, UnreachableTarget, NotConverged, ObjectLost };
const char* to_string(PlacementStatus status);

struct ServoStepResult {
  TrajectoryLog log;  // every placement, told apart by the placement column
  std::vector<PlacementStatus> statuses;
};

// One frozen-Jacobian episode per placement (the scene position when none are given).
ServoStepResult servo_step(const ScenarioConfig& config, const JacobianFile& jacobian);
ExperimentResult run_servo_step(const ScenarioConfig& config, const std::filesystem::path& jacobian_path,
                                const std::filesystem::path& out, bool gnuplot);

struct DepthRun {
  std::vector<DepthObservation> observations;
  std::vector<DepthEstimate> trace;
  bool converged = false;
  std::optional<double> z_true;  // absent for replayed data
  std::optional<ApproachResult> approach;
};

// Replays recorded observations through the estimator; converged follows
// convergence_check with the scenario's approach window and tolerance.
DepthRun replay_depth(const std::vector<DepthObservation>& observations, const ApproachConfig& approach);
// Centers on the target, then approaches while estimating depth.
DepthRun simulate_depth(const ScenarioConfig& config, const PseudoJacobian& jacobian);
ExperimentResult run_approach_depth(const ScenarioConfig& config, const std::optional<std::filesystem::path>& replay,
                                    const std::optional<std::filesystem::path>& jacobian_path,
                                    const std::filesystem::path& out, bool gnuplot);

// grasp_pipeline on the scenario's target object.
GraspOutcome grasp(const ScenarioConfig& config, const PseudoJacobian& center, const PseudoJacobian& fine);
ExperimentResult run_grasp(const ScenarioConfig& config, const std::optional<std::filesystem::path>& jacobian_path,
                           const std::filesystem::path& out, bool gnuplot);

struct TrialRow {
  std::string item;
  double height = 0.0;
  bool vs = false;  // centering reached tolerance
  bool de = false;  // depth converged and within the grasp depth margin of the truth
  std::optional<bool> grasped;
  std::optional<double> z_hat;
  double z_true = 0.0;
  std::string note;
};

std::vector<TrialRow> trial_suite(const ScenarioConfig& config, const PseudoJacobian& center,
                                  const PseudoJacobian& fine);
CsvTable trial_report_csv(const std::vector<TrialRow>& rows);
std::string trial_report_text(const std::vector<TrialRow>& rows);
ExperimentResult run_trial_suite(const ScenarioConfig& config, const std::optional<std::filesystem::path>& jacobian_path,
                                 const std::filesystem::path& out, bool gnuplot);

struct ReplayReport {
  std::size_t records = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> details;  // first few mismatches
};

// Re-renders every logged frame from its joint state and object position and
// compares visibility, area and centroid bit for bit.
ReplayReport replay_trajectory(const ScenarioConfig& config, const TrajectoryLog& log);
ExperimentResult run_replay(const ScenarioConfig& config, const std::filesystem::path& trajectory_csv);

// The scenario's J+: the servo block's jacobian file when given, otherwise
// init_seed * H.
PseudoJacobian initial_jacobian(const ServoSettings& settings);

}  // namespace segservo
