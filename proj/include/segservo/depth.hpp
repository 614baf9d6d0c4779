#pragma once

#include <filesystem>
#include <vector>

#include "segservo/csv.hpp"

namespace segservo {

// One frame of an optical-axis approach toward a centered object.
struct DepthObservation {
  double z_camera = 0.0;  // meters
  double s_A = 0.0;       // pixels, > 0
};

struct DepthEstimate {
  double z_object_hat = 0.0;
  double c_object_hat = 0.0;  // meters * sqrt(pixels)
  int m = 0;
  double residual_rms = 0.0;
};

// Least squares over rows [sqrt(s_A), 1] . (z_object, c_object) = z_camera * sqrt(s_A).
// Throws InsufficientData (m < 2), DegenerateSystem (all sqrt(s_A) equal) or
// InvalidArgument (s_A <= 0, non-finite z).
DepthEstimate estimate(const std::vector<DepthObservation>& observations);

// Estimates over every prefix of length 2..m.
std::vector<DepthEstimate> incremental_estimates(const std::vector<DepthObservation>& observations);

// The last `window` estimates span less than tol. Throws InsufficientData
// when the trace is shorter than the window, InvalidArgument for window < 2.
bool convergence_check(const std::vector<DepthEstimate>& trace, int window, double tol);

// step,z_camera_m,s_A_px,z_hat_m,c_hat,residual_rms. z_hat, c_hat and
// residual are empty until two observations exist.
CsvTable observations_csv(const std::vector<DepthObservation>& observations);
// Reads step, z_camera_m and s_A_px; other columns are ignored.
std::vector<DepthObservation> observations_from_csv(const CsvTable& table);

}  // namespace segservo
