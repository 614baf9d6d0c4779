#include "segservo/camera.hpp"

#include "segservo/error.hpp"

namespace segservo {

CameraModel CameraModel::centered(double focal_px, int width, int height) {
  CameraModel model{focal_px, width / 2.0, height / 2.0, width, height};
  model.validate();
  return model;
}

void CameraModel::validate() const {
  if (!(focal_px > 0.0)) throw Error(ErrorKind::ConfigError, "focal length must be positive");
  if (width <= 0 || height <= 0) throw Error(ErrorKind::ConfigError, "image size must be positive");
  if (principal_x < 0.0 || principal_x >= width || principal_y < 0.0 || principal_y >= height) {
    throw Error(ErrorKind::ConfigError, "principal point outside the image");
  }
}

PixelCoord project_point(const Pose& camera, const CameraModel& model, const Eigen::Vector3d& world_point) {
  const Eigen::Vector3d p = camera.rotation.transpose() * (world_point - camera.translation);
  if (!(p.z() > 0.0)) throw Error(ErrorKind::BehindCamera, "point is not in front of the camera");
  return {model.principal_x + model.focal_px * p.x() / p.z(), model.principal_y + model.focal_px * p.y() / p.z()};
}

}  // namespace segservo
