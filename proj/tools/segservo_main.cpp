// segservo: run segmentation-based servoing experiments in simulation.
//
// Exit codes: 0 success, 2 configuration error, 3 failed or non-converged
// outcome, 1 internal error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "segservo/error.hpp"
#include "segservo/experiments.hpp"

namespace fs = std::filesystem;
using namespace segservo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string jacobian;
  std::string replay;
  std::string trajectory;
  bool gnuplot = false;
};

fs::path output_dir(const Options& options, const ScenarioConfig& config) {
  if (!options.out.empty()) return options.out;
  if (const char* env = std::getenv("SEGSERVO_OUT"); env && *env) return env;
  return config.output;
}

std::optional<fs::path> optional_path(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return fs::path(text);
}

ScenarioConfig load(const Options& options, std::optional<ExperimentKind> expected) {
  ScenarioConfig config = load_scenario_file(options.config);
  if (expected && config.kind != *expected) {
    throw Error(ErrorKind::ConfigError, options.config + " describes a '" + to_string(config.kind) +
                                            "' experiment, not '" + to_string(*expected) + "'");
  }
  if (options.seed) override_seed(config, *options.seed);
  return config;
}

int report(const ExperimentResult& result) {
  std::cout << result.summary;
  return result.success ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segmentation-mask visual servoing, depth estimation and grasping in simulation"};
  app.require_subcommand(1);
  Options options;

  app.add_option("--config", options.config, "Scenario file (YAML)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", options.seed, "Override the scenario seed");
  app.add_option("--out", options.out, "Output directory (else $SEGSERVO_OUT, else the scenario's output)");
  app.add_option("--jacobian", options.jacobian, "J+ file for frozen or warm-started servoing");
  app.add_flag("--gnuplot", options.gnuplot, "Also write whitespace-separated .dat copies of every CSV");

  auto* learn_cmd = app.add_subcommand("learn", "Learn J+ online with the Hadamard-Broyden update");
  auto* step_cmd = app.add_subcommand("servo-step", "Frozen-J+ step responses, one per object placement");
  auto* depth_cmd = app.add_subcommand("approach-depth", "Center, approach and estimate object depth");
  depth_cmd->add_option("--replay", options.replay, "Observation CSV to replay instead of simulating")
      ->check(CLI::ExistingFile);
  auto* grasp_cmd = app.add_subcommand("grasp", "Full grasp pipeline on the target object");
  auto* trials_cmd = app.add_subcommand("trials", "Trial suite report (VS and DE success per item)");
  auto* replay_cmd = app.add_subcommand("replay", "Re-render a logged trajectory and compare features");
  replay_cmd->add_option("trajectory", options.trajectory, "trajectory.csv written by another subcommand")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (learn_cmd->parsed()) {
      const ScenarioConfig config = load(options, ExperimentKind::Learn);
      return report(run_learn(config, output_dir(options, config), options.gnuplot));
    }
    if (step_cmd->parsed()) {
      const ScenarioConfig config = load(options, ExperimentKind::ServoStep);
      fs::path jacobian = options.jacobian;
      if (jacobian.empty()) {
        if (!config.servo.jacobian) throw Error(ErrorKind::ConfigError, "servo-step needs --jacobian or servo.jacobian");
        jacobian = *config.servo.jacobian;
      }
      return report(run_servo_step(config, jacobian, output_dir(options, config), options.gnuplot));
    }
    if (depth_cmd->parsed()) {
      const ScenarioConfig config = load(options, ExperimentKind::ApproachDepth);
      return report(run_approach_depth(config, optional_path(options.replay), optional_path(options.jacobian),
                                       output_dir(options, config), options.gnuplot));
    }
    if (grasp_cmd->parsed()) {
      const ScenarioConfig config = load(options, ExperimentKind::Grasp);
      return report(run_grasp(config, optional_path(options.jacobian), output_dir(options, config), options.gnuplot));
    }
    if (trials_cmd->parsed()) {
      const ScenarioConfig config = load(options, ExperimentKind::TrialSuite);
      return report(
          run_trial_suite(config, optional_path(options.jacobian), output_dir(options, config), options.gnuplot));
    }
    if (replay_cmd->parsed()) {
      return report(run_replay(load(options, std::nullopt), options.trajectory));
    }
  } catch (const Error& e) {
    std::cerr << "segservo: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::ParseError ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "segservo: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
