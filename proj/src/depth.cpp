#include "segservo/depth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

DepthEstimate estimate(const std::vector<DepthObservation>& observations) {
  const auto m = static_cast<Eigen::Index>(observations.size());
  if (m < 2) throw Error(ErrorKind::InsufficientData, "depth estimate needs at least two observations");

  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& o = observations[static_cast<std::size_t>(i)];
    if (!(o.s_A > 0.0) || !std::isfinite(o.s_A) || !std::isfinite(o.z_camera)) {
      throw Error(ErrorKind::InvalidArgument, "observation needs finite z_camera and s_A > 0");
    }
    const double root = std::sqrt(o.s_A);
    a(i, 0) = root;
    a(i, 1) = 1.0;
    b[i] = o.z_camera * root;
  }
  const double lo = a.col(0).minCoeff();
  const double hi = a.col(0).maxCoeff();
  if (hi - lo <= 1e-12 * hi) {
    throw Error(ErrorKind::DegenerateSystem, "all observations have the same area");
  }

  const Eigen::Vector2d x = a.householderQr().solve(b);
  const Eigen::VectorXd residual = a * x - b;
  return {x[0], x[1], static_cast<int>(m), std::sqrt(residual.squaredNorm() / static_cast<double>(m))};
}

std::vector<DepthEstimate> incremental_estimates(const std::vector<DepthObservation>& observations) {
  if (observations.size() < 2) throw Error(ErrorKind::InsufficientData, "need at least two observations");
  std::vector<DepthEstimate> trace;
  std::vector<DepthObservation> prefix(observations.begin(), observations.begin() + 1);
  for (std::size_t k = 1; k < observations.size(); ++k) {
    prefix.push_back(observations[k]);
    trace.push_back(estimate(prefix));
  }
  return trace;
}

bool convergence_check(const std::vector<DepthEstimate>& trace, int window, double tol) {
  if (window < 2) throw Error(ErrorKind::InvalidArgument, "convergence window must be at least 2");
  if (trace.size() < static_cast<std::size_t>(window)) {
    throw Error(ErrorKind::InsufficientData, "trace shorter than the convergence window");
  }
  const auto tail = trace.end() - window;
  const auto [lo, hi] = std::minmax_element(tail, trace.end(), [](const auto& a, const auto& b) {
    return a.z_object_hat < b.z_object_hat;
  });
  return hi->z_object_hat - lo->z_object_hat < tol;
}

CsvTable observations_csv(const std::vector<DepthObservation>& observations) {
  CsvTable table;
  table.header = {"step", "z_camera_m", "s_A_px", "z_hat_m", "c_hat", "residual_rms"};
  std::vector<DepthObservation> prefix;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    prefix.push_back(observations[i]);
    std::vector<std::string> row{std::to_string(i), format_double(observations[i].z_camera),
                                 format_double(observations[i].s_A)};
    bool solved = false;
    if (prefix.size() >= 2) {
      try {
        const DepthEstimate e = estimate(prefix);
        row.push_back(format_double(e.z_object_hat));
        row.push_back(format_double(e.c_object_hat));
        row.push_back(format_double(e.residual_rms));
        solved = true;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::DegenerateSystem) throw;
      }
    }
    if (!solved) row.insert(row.end(), 3, "");
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<DepthObservation> observations_from_csv(const CsvTable& table) {
  const std::size_t z = table.column("z_camera_m");
  const std::size_t s = table.column("s_A_px");
  table.column("step");
  std::vector<DepthObservation> out;
  for (const auto& row : table.rows) out.push_back({parse_double(row[z]), parse_double(row[s])});
  return out;
}

}  // namespace segservo
