#include "segservo/approach.hpp"

#include <cmath>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

void ApproachConfig::validate() const {
  if (lift_joint.empty()) throw Error(ErrorKind::ConfigError, "approach lift joint is empty");
  if (!(decrement > 0.0) || !std::isfinite(decrement)) {
    throw Error(ErrorKind::ConfigError, "approach decrement must be positive");
  }
  if (!(travel_budget > 0.0)) throw Error(ErrorKind::ConfigError, "approach travel budget must be positive");
  if (window < 2) throw Error(ErrorKind::ConfigError, "approach convergence window must be at least 2");
  if (min_observations < 2) throw Error(ErrorKind::ConfigError, "approach needs at least two observations");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::ConfigError, "approach convergence tolerance must be positive");
  if (!(max_area_px > 0.0)) throw Error(ErrorKind::ConfigError, "approach max_area_px must be positive");
  if (recenter_max_steps < 0) throw Error(ErrorKind::ConfigError, "recenter_max_steps must be non-negative");
}

ApproachResult approach_depth(const KinematicChain& chain, const SegmentationSource& segmenter,
                              const ServoConfig& servo, PseudoJacobian jacobian, JointState start,
                              const ApproachConfig& config, const EpisodeOptions& options) {
  config.validate();
  const JointDescriptor* lift = chain.find(config.lift_joint);
  if (!lift) throw Error(ErrorKind::ConfigError, "lift joint '" + config.lift_joint + "' is not in the chain");

  ApproachResult result;
  result.jacobian = std::move(jacobian);
  result.final_q = std::move(start);
  EpisodeOptions episode = options;
  episode.max_steps = config.recenter_max_steps;
  bool first = true;

  while (true) {
    EpisodeResult centered =
        servo_episode(chain, segmenter, servo, result.jacobian, result.final_q, episode);
    if (first) {
      result.log = centered.log;
      first = false;
    } else {
      result.log.append(centered.log);
    }
    result.updates.insert(result.updates.end(), centered.updates.begin(), centered.updates.end());
    result.jacobian = centered.jacobian;
    result.final_q = centered.final_q;
    episode.first_frame = result.next_frame = centered.next_frame;
    episode.first_step = result.next_step = centered.next_step;
    episode.updates_so_far += centered.updates_applied;

    if (centered.status == EpisodeStatus::ObjectLost) {
      result.status = EpisodeStatus::ObjectLost;
      break;
    }
    const TrajectoryRecord& last = centered.log.records.back();
    if (centered.status == EpisodeStatus::Converged) {
      const double z_camera = forward_kinematics(chain, result.final_q).translation.z();
      result.observations.push_back({z_camera, static_cast<double>(last.area)});
    } else {
      result.discarded.push_back("step " + std::to_string(last.step) + ": not centered, |e| = " +
                                 format_double(last.error.norm()));
    }

    if (result.observations.size() >= 2) {
      try {
        result.trace.push_back(estimate(result.observations));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::DegenerateSystem) throw;
      }
    }
    if (static_cast<int>(result.observations.size()) >= config.min_observations &&
        static_cast<int>(result.trace.size()) >= config.window &&
        convergence_check(result.trace, config.window, config.tolerance)) {
      result.converged = true;
      result.status = EpisodeStatus::Converged;
      break;
    }

    if (static_cast<double>(last.area) >= config.max_area_px) {
      result.status = EpisodeStatus::MaxSteps;
      break;
    }
    const double current = result.final_q.at(config.lift_joint);
    const double next = current - config.decrement;
    if (result.traveled + config.decrement > config.travel_budget + 1e-12 || next < lift->lower) {
      result.status = EpisodeStatus::MaxSteps;
      break;
    }
    result.final_q.set(config.lift_joint, next);
    result.traveled += config.decrement;
  }

  if (!result.trace.empty()) result.final_estimate = result.trace.back();
  return result;
}

}  // namespace segservo
