#pragma once

#include <Eigen/Core>

#include "segservo/geometry.hpp"

namespace segservo {

// Ideal pinhole camera; no lens distortion. The camera frame has x to the
// image right, y to the image bottom and z along the optical axis.
struct CameraModel {
  double focal_px = 500.0;
  double principal_x = 320.0;
  double principal_y = 240.0;
  int width = 640;
  int height = 480;

  // Principal point at (width / 2, height / 2).
  static CameraModel centered(double focal_px, int width, int height);

  void validate() const;  // throws ConfigError
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

// Throws BehindCamera when the point has non-positive optical-axis depth.
PixelCoord project_point(const Pose& camera, const CameraModel& model, const Eigen::Vector3d& world_point);

// Camera-frame direction (x, y, 1) of the ray through pixel (u, v).
inline Eigen::Vector3d pixel_ray(const CameraModel& model, double u, double v) {
  return {(u - model.principal_x) / model.focal_px, (v - model.principal_y) / model.focal_px, 1.0};
}

}  // namespace segservo
