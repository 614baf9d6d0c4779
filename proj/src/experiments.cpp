#include "segservo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

namespace fs = std::filesystem;

PseudoJacobian initial_jacobian(const ServoSettings& settings) {
  if (!settings.jacobian) {
    return init_pseudojacobian(settings.config.coupling, settings.config.joints, settings.init_seed);
  }
  const JacobianFile file = load_jacobian(*settings.jacobian);
  if (file.jacobian.joints() != settings.config.joints) {
    throw Error(ErrorKind::ConfigError,
                settings.jacobian->string() + ": joints do not match preset '" + settings.preset + "'");
  }
  return file.jacobian;
}

namespace {

Scene scene_with_target(const ScenarioConfig& config, const std::string& object,
                        const std::optional<Eigen::Vector3d>& position) {
  Scene scene = config.scene.scene;
  if (position) {
    Pose pose = scene.object(object).pose;
    pose.translation = *position;
    scene.set_pose(object, pose);
  }
  return scene;
}

void write_outputs(const fs::path& out, const std::string& name, const CsvTable& table, bool gnuplot) {
  save_csv(out / (name + ".csv"), table);
  if (gnuplot) save_gnuplot(out / (name + ".dat"), table);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  file << text;
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::ConfigError, "cannot create output directory " + out.string());
}

std::string jacobian_lines(const PseudoJacobian& j) {
  std::ostringstream text;
  for (int i = 0; i < j.rows(); ++i) {
    text << "  " << j.joints()[static_cast<std::size_t>(i)];
    for (int k = 0; k < j.cols(); ++k) text << ' ' << format_double(j(i, k));
    text << '\n';
  }
  return text.str();
}

JacobianFile as_file(const ServoSettings& settings, const PseudoJacobian& jacobian) {
  return {jacobian, settings.config.coupling, settings.config.alpha, settings.config.gain, settings.config.target};
}

const CameraRig& rig_for(const ScenarioConfig& config, const ServoSettings& settings) {
  return config.scene.camera(settings.camera);
}

}  // namespace

LearnResult learn(const ScenarioConfig& config) {
  const ServoSettings& settings = config.servo;
  if (!(settings.config.alpha > 0.0)) throw Error(ErrorKind::ConfigError, "learning needs alpha > 0");
  const CameraRig& rig = rig_for(config, settings);
  const Scene scene = scene_with_target(config, config.target_object, config.object_position);
  const SimulatedSegmenter segmenter(scene, rig.model, config.target_object, config.noise);

  LearnResult result;
  result.jacobian = initial_jacobian(settings);
  result.log.target = settings.config.target;
  for (const auto& joint : rig.chain.joints()) result.log.joint_names.push_back(joint.name);

  EpisodeOptions options;
  options.object_position = scene.object(config.target_object).pose.translation;
  JointState q = config.start_pose;
  int attempts = 0;
  while (true) {
    options.max_steps = std::min(settings.max_steps, config.update_budget - attempts);
    EpisodeResult episode = servo_episode(rig.chain, segmenter, settings.config, result.jacobian, q, options);
    result.log.append(episode.log);
    result.samples.insert(result.samples.end(), episode.updates.begin(), episode.updates.end());
    result.jacobian = episode.jacobian;
    result.updates_applied += episode.updates_applied;
    attempts += static_cast<int>(episode.updates.size());
    options.first_frame = episode.next_frame;
    options.first_step = episode.next_step;
    options.updates_so_far += episode.updates_applied;
    result.status = episode.status;

    if (episode.status != EpisodeStatus::ObjectLost || result.resets >= config.max_resets ||
        attempts >= config.update_budget) {
      break;
    }
    ++result.resets;
    result.log.records.back().events.emplace_back(event::kReset);
    q = config.start_pose;
  }
  return result;
}

ExperimentResult run_learn(const ScenarioConfig& config, const fs::path& out, bool gnuplot) {
  const LearnResult result = learn(config);
  prepare(out);
  write_outputs(out, "trajectory", to_csv(result.log), gnuplot);
  write_outputs(out, "parameter_trace",
                parameter_trace_csv(result.samples, result.jacobian, config.servo.config.coupling), gnuplot);
  save_jacobian(out / "jacobian.txt", as_file(config.servo, result.jacobian));

  std::ostringstream s;
  const auto& last = result.log.records.back();
  s << "experiment learn\n"
    << "preset " << config.servo.preset << '\n'
    << "status " << to_string(result.status) << '\n'
    << "update_attempts " << result.samples.size() << '\n'
    << "updates_applied " << result.updates_applied << '\n'
    << "resets " << result.resets << '\n'
    << "final_error_px " << (last.visible ? format_double(last.error.norm()) : "lost") << '\n'
    << "jacobian\n"
    << jacobian_lines(result.jacobian);
  write_text(out / "summary.txt", s.str());
  return {result.status == EpisodeStatus::Converged, s.str()};
}

const char* to_string(PlacementStatus status) {
  switch (status) {
    case PlacementStatus::Converged: return "converged";
    case PlacementStatus::UnreachableTarget: return "unreachable_target";
    case PlacementStatus::NotConverged: return "not_converged";
    case PlacementStatus::ObjectLost: return "object_lost";
  }
  return "unknown";
}

ServoStepResult servo_step(const ScenarioConfig& config, const JacobianFile& jacobian) {
  const ServoSettings& settings = config.servo;
  if (jacobian.jacobian.joints() != settings.config.joints) {
    throw Error(ErrorKind::ConfigError, "J+ file joints do not match preset '" + settings.preset + "'");
  }
  const CameraRig& rig = rig_for(config, settings);
  ServoConfig frozen = settings.config;
  frozen.alpha = 0.0;

  std::vector<std::optional<Eigen::Vector3d>> placements;
  for (const auto& p : config.placements) placements.emplace_back(p);
  if (placements.empty()) placements.push_back(config.object_position);

  ServoStepResult result;
  result.log.target = frozen.target;
  for (const auto& joint : rig.chain.joints()) result.log.joint_names.push_back(joint.name);
  EpisodeOptions options;
  options.max_steps = settings.max_steps;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const Scene scene = scene_with_target(config, config.target_object, placements[i]);
    const SimulatedSegmenter segmenter(scene, rig.model, config.target_object, config.noise);
    options.placement = static_cast<int>(i);
    options.object_position = scene.object(config.target_object).pose.translation;
    const EpisodeResult episode =
        servo_episode(rig.chain, segmenter, frozen, jacobian.jacobian, config.start_pose, options);
    result.log.append(episode.log);
    options.first_frame = episode.next_frame;
    options.first_step = episode.next_step;

    PlacementStatus status = PlacementStatus::NotConverged;
    if (episode.status == EpisodeStatus::Converged) {
      status = PlacementStatus::Converged;
    } else if (episode.status == EpisodeStatus::ObjectLost) {
      status = PlacementStatus::ObjectLost;
    } else if (episode.saturated) {
      status = PlacementStatus::UnreachableTarget;
    }
    result.statuses.push_back(status);
  }
  return result;
}

ExperimentResult run_servo_step(const ScenarioConfig& config, const fs::path& jacobian_path, const fs::path& out,
                                bool gnuplot) {
  const ServoStepResult result = servo_step(config, load_jacobian(jacobian_path));
  prepare(out);
  write_outputs(out, "trajectory", to_csv(result.log), gnuplot);

  std::ostringstream s;
  s << "experiment servo_step\n"
    << "preset " << config.servo.preset << '\n';
  bool ok = true;
  for (std::size_t i = 0; i < result.statuses.size(); ++i) {
    std::int64_t steps = 0;
    for (const auto& r : result.log.records) steps += r.placement == static_cast<int>(i) ? 1 : 0;
    s << "placement " << i << ' ' << to_string(result.statuses[i]) << " steps " << steps - 1 << '\n';
    ok = ok && (result.statuses[i] == PlacementStatus::Converged ||
                result.statuses[i] == PlacementStatus::UnreachableTarget);
  }
  write_text(out / "summary.txt", s.str());
  return {ok, s.str()};
}

DepthRun replay_depth(const std::vector<DepthObservation>& observations, const ApproachConfig& approach) {
  DepthRun run;
  run.observations = observations;
  run.trace = incremental_estimates(observations);
  run.converged = static_cast<int>(run.trace.size()) >= approach.window &&
                  convergence_check(run.trace, approach.window, approach.tolerance);
  return run;
}

namespace {

struct CenterAndApproach {
  EpisodeResult centering;
  std::optional<ApproachResult> approach;
};

CenterAndApproach center_and_approach(const KinematicChain& chain, const SegmentationSource& segmenter,
                                      const ServoSettings& settings, const PseudoJacobian& jacobian,
                                      const JointState& start, const ApproachConfig& approach,
                                      const Eigen::Vector3d& object_position) {
  EpisodeOptions options;
  options.max_steps = settings.max_steps;
  options.object_position = object_position;
  CenterAndApproach r{servo_episode(chain, segmenter, settings.config, jacobian, start, options), std::nullopt};
  if (r.centering.status != EpisodeStatus::Converged) return r;
  options.first_frame = r.centering.next_frame;
  options.first_step = r.centering.next_step;
  options.updates_so_far = r.centering.updates_applied;
  r.approach = approach_depth(chain, segmenter, settings.config, r.centering.jacobian, r.centering.final_q, approach,
                              options);
  return r;
}

}  // namespace

DepthRun simulate_depth(const ScenarioConfig& config, const PseudoJacobian& jacobian) {
  const ServoSettings& settings = config.servo;
  const CameraRig& rig = rig_for(config, settings);
  const Scene scene = scene_with_target(config, config.target_object, config.object_position);
  const SimulatedSegmenter segmenter(scene, rig.model, config.target_object, config.noise);
  const SceneObject& object = scene.object(config.target_object);

  CenterAndApproach r = center_and_approach(rig.chain, segmenter, settings, jacobian, config.start_pose,
                                            config.approach, object.pose.translation);
  DepthRun run;
  run.z_true = reference_depth_z(object);
  if (!r.approach) {
    ApproachResult failed;
    failed.status = r.centering.status;
    failed.log = r.centering.log;
    failed.final_q = r.centering.final_q;
    run.approach = std::move(failed);
    return run;
  }
  run.observations = r.approach->observations;
  run.trace = r.approach->trace;
  run.converged = r.approach->converged;
  TrajectoryLog log = r.centering.log;
  log.append(r.approach->log);
  r.approach->log = std::move(log);
  run.approach = std::move(r.approach);
  return run;
}

ExperimentResult run_approach_depth(const ScenarioConfig& config, const std::optional<fs::path>& replay,
                                    const std::optional<fs::path>& jacobian_path, const fs::path& out,
                                    bool gnuplot) {
  const std::optional<fs::path> fixture = replay ? replay : config.replay;
  DepthRun run;
  if (fixture) {
    run = replay_depth(observations_from_csv(load_csv(*fixture)), config.approach);
  } else {
    ServoSettings settings = config.servo;
    if (jacobian_path) settings.jacobian = *jacobian_path;
    run = simulate_depth(config, initial_jacobian(settings));
  }

  prepare(out);
  write_outputs(out, "observations", observations_csv(run.observations), gnuplot);
  if (run.approach) write_outputs(out, "trajectory", to_csv(run.approach->log), gnuplot);

  std::ostringstream s;
  s << "experiment approach_depth\n"
    << "source " << (fixture ? "replay" : "simulation") << '\n'
    << "observations " << run.observations.size() << '\n';
  if (run.approach) {
    s << "approach_status " << to_string(run.approach->status) << '\n'
      << "discarded " << run.approach->discarded.size() << '\n'
      << "traveled_m " << format_double(run.approach->traveled) << '\n';
  }
  if (!run.trace.empty()) {
    s << "z_object_hat_m " << format_double(run.trace.back().z_object_hat) << '\n'
      << "c_object_hat " << format_double(run.trace.back().c_object_hat) << '\n'
      << "residual_rms " << format_double(run.trace.back().residual_rms) << '\n';
  }
  if (run.z_true) s << "z_object_true_m " << format_double(*run.z_true) << '\n';
  s << "converged " << (run.converged ? "yes" : "no") << '\n';
  write_text(out / "summary.txt", s.str());
  // A replayed series is judged by its estimate; it has no approach to stop.
  return {fixture ? !run.trace.empty() : run.converged, s.str()};
}

namespace {

GraspPipelineConfig pipeline_config(const ScenarioConfig& config, const PseudoJacobian& center,
                                    const PseudoJacobian& fine, const NoiseModel& noise) {
  GraspPipelineConfig p;
  p.center = config.servo.config;
  p.center_jacobian = center;
  p.fine = config.fine.config;
  p.fine_jacobian = fine;
  p.approach = config.approach;
  p.grasp = config.grasp;
  p.noise = noise;
  p.max_steps = config.servo.max_steps;
  return p;
}

void require_same_camera(const ScenarioConfig& config) {
  if (config.fine.camera != config.servo.camera) {
    throw Error(ErrorKind::ConfigError, "grasp servo presets must share one camera");
  }
}

}  // namespace

GraspOutcome grasp(const ScenarioConfig& config, const PseudoJacobian& center, const PseudoJacobian& fine) {
  require_same_camera(config);
  const CameraRig& rig = rig_for(config, config.servo);
  Scene scene = scene_with_target(config, config.target_object, config.object_position);
  return grasp_pipeline(scene, rig.chain, rig.model, config.target_object,
                        pipeline_config(config, center, fine, config.noise), config.start_pose);
}

ExperimentResult run_grasp(const ScenarioConfig& config, const std::optional<fs::path>& jacobian_path,
                           const fs::path& out, bool gnuplot) {
  ServoSettings center = config.servo;
  if (jacobian_path) center.jacobian = *jacobian_path;
  const GraspOutcome outcome = grasp(config, initial_jacobian(center), initial_jacobian(config.fine));

  prepare(out);
  write_outputs(out, "attempts", attempts_csv(outcome.attempts), gnuplot);
  write_outputs(out, "observations", observations_csv(outcome.approach.observations), gnuplot);
  write_outputs(out, "trajectory", to_csv(outcome.log), gnuplot);

  std::ostringstream s;
  s << "experiment grasp\n"
    << "status " << to_string(outcome.status) << '\n';
  if (!outcome.reason.empty()) s << "reason " << outcome.reason << '\n';
  s << "centered " << (outcome.centered ? "yes" : "no") << '\n'
    << "depth_converged " << (outcome.approach.converged ? "yes" : "no") << '\n';
  if (outcome.z_object_hat) s << "z_object_hat_m " << format_double(*outcome.z_object_hat) << '\n';
  s << "z_object_true_m " << format_double(outcome.z_object_true) << '\n';
  if (outcome.z_object_hat) s << "z_camera_grasp_m " << format_double(outcome.z_camera_grasp) << '\n';
  s << "attempts " << outcome.attempts.size() << '\n';
  if (!outcome.attempts.empty()) s << "final_error_px " << format_double(outcome.final_error_norm) << '\n';
  if (!outcome.approach.converged && !outcome.approach.trace.empty()) {
    s << "depth_trace";
    for (const auto& e : outcome.approach.trace) s << ' ' << format_double(e.z_object_hat);
    s << '\n';
  }
  write_text(out / "summary.txt", s.str());
  return {outcome.status == GraspStatus::Succeeded, s.str()};
}

std::vector<TrialRow> trial_suite(const ScenarioConfig& config, const PseudoJacobian& center,
                                  const PseudoJacobian& fine) {
  const CameraRig& rig = rig_for(config, config.servo);
  std::vector<TrialRow> rows;
  for (const TrialSpec& trial : config.trials) {
    TrialRow row;
    row.item = trial.item;
    row.height = trial.height;
    try {
      Scene scene = config.scene.scene;
      Pose pose = scene.object(trial.object).pose;
      if (trial.position) pose.translation = *trial.position;
      pose.translation.z() += trial.height;
      scene.set_pose(trial.object, pose);
      row.z_true = reference_depth_z(scene.object(trial.object));

      if (trial.grasp) {
        require_same_camera(config);
        const GraspOutcome outcome =
            grasp_pipeline(scene, rig.chain, rig.model, trial.object, pipeline_config(config, center, fine, trial.noise),
                           config.start_pose);
        row.vs = outcome.centered;
        row.z_hat = outcome.z_object_hat;
        row.de = outcome.approach.converged && row.z_hat &&
                 std::abs(*row.z_hat - row.z_true) <= config.grasp.depth_margin;
        row.grasped = outcome.status == GraspStatus::Succeeded;
        row.note = outcome.reason;
      } else {
        const SimulatedSegmenter segmenter(scene, rig.model, trial.object, trial.noise);
        const CenterAndApproach r = center_and_approach(rig.chain, segmenter, config.servo, center,
                                                        config.start_pose, config.approach, pose.translation);
        row.vs = r.centering.status == EpisodeStatus::Converged;
        if (!row.vs) row.note = std::string("centering ") + to_string(r.centering.status);
        if (r.approach) {
          if (r.approach->final_estimate) row.z_hat = r.approach->final_estimate->z_object_hat;
          row.de = r.approach->converged && row.z_hat &&
                   std::abs(*row.z_hat - row.z_true) <= config.grasp.depth_margin;
          if (!r.approach->converged) row.note = std::string("approach ") + to_string(r.approach->status);
        }
      }
    } catch (const Error& e) {
      row.note = std::string(to_string(e.kind())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable trial_report_csv(const std::vector<TrialRow>& rows) {
  CsvTable table;
  table.header = {"item", "height", "VS", "DE", "grasp", "z_hat_m", "z_true_m", "note"};
  for (const auto& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    table.rows.push_back({r.item, format_double(r.height), r.vs ? "1" : "0", r.de ? "1" : "0",
                          r.grasped ? (*r.grasped ? "1" : "0") : "", r.z_hat ? format_double(*r.z_hat) : "",
                          format_double(r.z_true), note});
  }
  return table;
}

std::string trial_report_text(const std::vector<TrialRow>& rows) {
  std::ostringstream s;
  s << "item                height  VS  DE  grasp\n";
  int vs = 0;
  int de = 0;
  int grasped = 0;
  int grasp_trials = 0;
  for (const auto& r : rows) {
    std::string item = r.item;
    item.resize(std::max<std::size_t>(item.size(), 18), ' ');
    std::string height = format_double(r.height);
    height.resize(std::max<std::size_t>(height.size(), 6), ' ');
    s << item << "  " << height << "  " << (r.vs ? "Y " : "N ") << "  " << (r.de ? "Y " : "N ") << "  "
      << (r.grasped ? (*r.grasped ? "Y" : "N") : "-") << '\n';
    vs += r.vs;
    de += r.de;
    if (r.grasped) {
      ++grasp_trials;
      grasped += *r.grasped;
    }
  }
  const auto rate = [](int k, std::size_t n) {
    return n == 0 ? std::string("-") : std::to_string(k) + "/" + std::to_string(n);
  };
  s << "VS success " << rate(vs, rows.size()) << '\n'
    << "DE success " << rate(de, rows.size()) << '\n'
    << "grasp success " << rate(grasped, static_cast<std::size_t>(grasp_trials)) << '\n';
  return s.str();
}

ExperimentResult run_trial_suite(const ScenarioConfig& config, const std::optional<fs::path>& jacobian_path,
                                 const fs::path& out, bool gnuplot) {
  ServoSettings center = config.servo;
  if (jacobian_path) center.jacobian = *jacobian_path;
  const std::vector<TrialRow> rows = trial_suite(config, initial_jacobian(center), initial_jacobian(config.fine));
  prepare(out);
  write_outputs(out, "report", trial_report_csv(rows), gnuplot);
  const std::string text = "experiment trial_suite\n" + trial_report_text(rows);
  write_text(out / "report.txt", text);
  // The suite always completes; per-trial failures are data, not an error.
  return {true, text};
}

ReplayReport replay_trajectory(const ScenarioConfig& config, const TrajectoryLog& log) {
  const CameraRig& rig = rig_for(config, config.servo);
  ReplayReport report;
  Scene scene = config.scene.scene;
  const Pose base = scene.object(config.target_object).pose;
  for (const auto& record : log.records) {
    Pose pose = base;
    pose.translation = record.object_position;
    scene.set_pose(config.target_object, pose);
    const BinaryMask mask = segment(scene, forward_kinematics(rig.chain, record.q), rig.model, config.target_object,
                                    config.noise, record.frame);
    ++report.records;
    const std::int64_t a = area(mask);
    bool same = (a > 0) == record.visible && a == record.area;
    if (same && record.visible) {
      const FeatureVector s = centroid(mask);
      same = s.s_x == record.s.s_x && s.s_y == record.s.s_y;
    }
    if (!same) {
      ++report.mismatches;
      if (report.details.size() < 5) {
        report.details.push_back("step " + std::to_string(record.step) + ": logged area " +
                                 std::to_string(record.area) + ", replayed " + std::to_string(a));
      }
    }
  }
  return report;
}

ExperimentResult run_replay(const ScenarioConfig& config, const fs::path& trajectory_csv) {
  const TrajectoryLog log = trajectory_from_csv(load_csv(trajectory_csv), config.servo.config.target);
  const ReplayReport report = replay_trajectory(config, log);
  std::ostringstream s;
  s << "replay " << trajectory_csv.filename().string() << '\n'
    << "records " << report.records << '\n'
    << "mismatches " << report.mismatches << '\n';
  for (const auto& d : report.details) s << "  " << d << '\n';
  return {report.mismatches == 0, s.str()};
}

}  // namespace segservo
