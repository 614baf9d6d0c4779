#pragma once

#include <optional>
#include <string>
#include <vector>

#include "segservo/depth.hpp"
#include "segservo/episode.hpp"

namespace segservo {

struct ApproachConfig {
  std::string lift_joint = "arm_lift";  // prismatic joint that moves the camera along its optical axis
  double decrement = 0.02;              // meters of camera travel between observations
  double travel_budget = 0.6;           // meters
  int min_observations = 18;
  // Stop descending once the mask is this large; a clipped mask breaks the
  // area-distance relation.
  double max_area_px = 92160.0;
  int window = 3;              // convergence window over the estimate trace
  double tolerance = 0.002;    // meters
  int recenter_max_steps = 20;

  void validate() const;  // throws ConfigError
};

struct ApproachResult {
  EpisodeStatus status = EpisodeStatus::MaxSteps;  // ObjectLost if the object left the view
  bool converged = false;                          // convergence_check passed
  std::vector<DepthObservation> observations;
  std::vector<DepthEstimate> trace;
  std::optional<DepthEstimate> final_estimate;
  std::vector<std::string> discarded;  // one reason per rejected frame
  double traveled = 0.0;
  TrajectoryLog log;
  std::vector<ParameterSample> updates;
  PseudoJacobian jacobian;
  JointState final_q;
  std::uint64_t next_frame = 0;
  std::int64_t next_step = 0;
};

// Alternate re-centering (servo_episode) with steps of the lift joint.
// Observations are kept only from frames where the servo reports the object
// centered. Stops once the estimate trace converges, the travel budget or
// the joint range is used up, or the mask reaches max_area_px.
ApproachResult approach_depth(const KinematicChain& chain, const SegmentationSource& segmenter,
                              const ServoConfig& servo, PseudoJacobian jacobian, JointState start,
                              const ApproachConfig& config, const EpisodeOptions& options);

}  // namespace segservo
