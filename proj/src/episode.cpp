#include "segservo/episode.hpp"

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

void TrajectoryLog::append(const TrajectoryLog& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

namespace {

std::string join(const std::vector<std::string>& parts, char separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(separator);
    out += parts[i];
  }
  return out;
}

}  // namespace

CsvTable to_csv(const TrajectoryLog& log) {
  CsvTable table;
  table.header = {"step", "placement", "frame"};
  for (const auto& name : log.joint_names) table.header.push_back("q_" + name);
  for (const char* column : {"object_x", "object_y", "object_z", "visible", "s_A", "s_x", "s_y", "e_x", "e_y",
                             "e_norm", "jacobian_version", "events"}) {
    table.header.emplace_back(column);
  }
  for (const auto& r : log.records) {
    std::vector<std::string> row{std::to_string(r.step), std::to_string(r.placement), std::to_string(r.frame)};
    for (const auto& name : log.joint_names) row.push_back(format_double(r.q.at(name)));
    for (int i = 0; i < 3; ++i) row.push_back(format_double(r.object_position[i]));
    row.push_back(r.visible ? "1" : "0");
    row.push_back(std::to_string(r.area));
    if (r.visible) {
      row.push_back(format_double(r.s.s_x));
      row.push_back(format_double(r.s.s_y));
      row.push_back(format_double(r.error.x()));
      row.push_back(format_double(r.error.y()));
      row.push_back(format_double(r.error.norm()));
    } else {
      row.insert(row.end(), 5, "");
    }
    row.push_back(std::to_string(r.jacobian_version));
    row.push_back(join(r.events, ';'));
    table.rows.push_back(std::move(row));
  }
  return table;
}

TrajectoryLog trajectory_from_csv(const CsvTable& table, const FeatureVector& target) {
  TrajectoryLog log;
  log.target = target;
  for (const auto& column : table.header) {
    if (column.starts_with("q_")) log.joint_names.push_back(column.substr(2));
  }
  const auto col = [&](const char* name) { return table.column(name); };
  for (const auto& row : table.rows) {
    TrajectoryRecord r;
    r.step = parse_int(row[col("step")]);
    r.placement = static_cast<int>(parse_int(row[col("placement")]));
    r.frame = static_cast<std::uint64_t>(parse_int(row[col("frame")]));
    for (const auto& name : log.joint_names) r.q.set(name, parse_double(row[table.column("q_" + name)]));
    r.object_position = {parse_double(row[col("object_x")]), parse_double(row[col("object_y")]),
                         parse_double(row[col("object_z")])};
    r.visible = row[col("visible")] == "1";
    r.area = parse_int(row[col("s_A")]);
    if (r.visible) {
      r.s = {parse_double(row[col("s_x")]), parse_double(row[col("s_y")])};
      r.error = {parse_double(row[col("e_x")]), parse_double(row[col("e_y")])};
    }
    r.jacobian_version = static_cast<int>(parse_int(row[col("jacobian_version")]));
    const auto& events = row[col("events")];
    if (!events.empty()) r.events = split(events, ';');
    log.records.push_back(std::move(r));
  }
  return log;
}

CsvTable parameter_trace_csv(const std::vector<ParameterSample>& samples, const PseudoJacobian& layout,
                             const CouplingMatrix& coupling) {
  static constexpr const char* kFeatureNames[kFeatureCount] = {"s_x", "s_y"};
  CsvTable table;
  table.header = {"update", "step", "applied", "normalized_denominator"};
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < layout.rows(); ++i) {
    for (int j = 0; j < layout.cols(); ++j) {
      if (!coupling(i, j)) continue;
      entries.emplace_back(i, j);
      table.header.push_back(layout.joints()[static_cast<std::size_t>(i)] + "/" + kFeatureNames[j]);
    }
  }
  for (const auto& sample : samples) {
    std::vector<std::string> row{std::to_string(sample.update_index), std::to_string(sample.step),
                                 sample.applied ? "1" : "0", format_double(sample.normalized_denominator)};
    for (const auto& [i, j] : entries) row.push_back(format_double(sample.values(i, j)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

const char* to_string(EpisodeStatus status) {
  switch (status) {
    case EpisodeStatus::Converged: return "converged";
    case EpisodeStatus::MaxSteps: return "max_steps";
    case EpisodeStatus::ObjectLost: return "object_lost";
  }
  return "unknown";
}

EpisodeResult servo_episode(const KinematicChain& chain, const SegmentationSource& segmenter,
                            const ServoConfig& config, PseudoJacobian jacobian, JointState start,
                            const EpisodeOptions& options) {
  if (jacobian.joints() != config.joints) {
    throw Error(ErrorKind::DimensionMismatch, "Jacobian rows do not match the controlled joints");
  }
  EpisodeResult result;
  result.log.target = config.target;
  if (options.logged_joints.empty()) {
    for (const auto& joint : chain.joints()) result.log.joint_names.push_back(joint.name);
  } else {
    result.log.joint_names = options.logged_joints;
  }

  std::uint64_t frame = options.first_frame;
  std::int64_t step = options.first_step;
  int updates = options.updates_so_far;

  const auto observe = [&](const JointState& q) {
    TrajectoryRecord record;
    record.step = step++;
    record.placement = options.placement;
    record.q = q;
    record.object_position = options.object_position;
    record.frame = frame;
    const BinaryMask mask = segmenter.segment(forward_kinematics(chain, q), frame++);
    record.area = area(mask);
    record.visible = record.area > 0;
    if (record.visible) {
      record.s = centroid(mask);
      record.error = feature_error(record.s, config.target);
    } else {
      record.events.emplace_back(event::kObjectLost);
    }
    record.jacobian_version = updates;
    return record;
  };

  JointState q = std::move(start);
  TrajectoryRecord current = observe(q);
  result.log.records.push_back(current);

  if (!current.visible) {
    result.status = EpisodeStatus::ObjectLost;
  } else {
    for (int k = 0;; ++k) {
      if (converged(current.error, config.tolerance_px)) {
        result.status = EpisodeStatus::Converged;
        break;
      }
      if (k >= options.max_steps) {
        result.status = EpisodeStatus::MaxSteps;
        break;
      }
      const Eigen::VectorXd commanded = control_step(jacobian, current.error, config.gain);
      const ClampResult clamp = clamp_to_limits(chain, apply_delta(q, config.joints, commanded));
      Eigen::VectorXd achieved(static_cast<Eigen::Index>(config.joints.size()));
      for (std::size_t i = 0; i < config.joints.size(); ++i) {
        achieved[static_cast<Eigen::Index>(i)] = clamp.state.at(config.joints[i]) - q.at(config.joints[i]);
      }

      TrajectoryRecord next = observe(clamp.state);
      if (!clamp.clamped.empty()) next.events.emplace_back(event::kLimitClamp);
      q = clamp.state;
      if (!next.visible) {
        result.log.records.push_back(std::move(next));
        result.status = EpisodeStatus::ObjectLost;
        break;
      }

      if (config.alpha > 0.0) {
        const Eigen::Vector2d delta_e = next.error - current.error;
        HbUpdateResult update =
            hb_update(jacobian, achieved, delta_e, config.alpha, config.coupling, config.singular_epsilon);
        if (update.applied) {
          ++updates;
          ++result.updates_applied;
          jacobian = std::move(update.jacobian);
        } else {
          next.events.emplace_back(event::kUpdateSkipped);
        }
        next.jacobian_version = updates;
        result.updates.push_back(
            {static_cast<int>(result.updates.size()) + 1 + options.updates_so_far, next.step, update.applied,
             update.normalized_denominator, jacobian.values()});
      }
      result.log.records.push_back(next);
      current = std::move(next);
    }
  }

  for (const auto& name : config.joints) {
    const JointDescriptor* joint = chain.find(name);
    if (!joint) continue;
    const double value = q.at(name);
    if (value <= joint->lower || value >= joint->upper) result.saturated = true;
  }
  result.jacobian = std::move(jacobian);
  result.final_q = std::move(q);
  result.next_frame = frame;
  result.next_step = step;
  return result;
}

}  // namespace segservo
