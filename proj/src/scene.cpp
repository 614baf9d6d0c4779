#include "segservo/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "segservo/error.hpp"

namespace segservo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool hits_sphere(const Sphere& sphere, const Pose& pose, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  const Eigen::Vector3d to_center = pose.translation - origin;
  const double a = dir.squaredNorm();
  const double b = to_center.dot(dir);
  const double c = to_center.squaredNorm() - sphere.radius * sphere.radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return false;
  return b + std::sqrt(disc) > 0.0;
}

bool hits_box(const Box& box, const Pose& pose, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  const Eigen::Vector3d o = pose.rotation.transpose() * (origin - pose.translation);
  const Eigen::Vector3d d = pose.rotation.transpose() * dir;
  double t_enter = 0.0;
  double t_exit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double h = box.half_extents[i];
    if (d[i] == 0.0) {
      if (std::abs(o[i]) > h) return false;
      continue;
    }
    double t1 = (-h - o[i]) / d[i];
    double t2 = (h - o[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
    if (t_enter > t_exit) return false;
  }
  return t_exit > 0.0;
}

bool hits_disk(const Disk& disk, const Pose& pose, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  const Eigen::Vector3d normal = pose.rotation * disk.normal.normalized();
  const double denom = normal.dot(dir);
  if (std::abs(denom) < 1e-15) return false;
  const double t = normal.dot(pose.translation - origin) / denom;
  if (!(t > 0.0)) return false;
  return (origin + t * dir - pose.translation).squaredNorm() <= disk.radius * disk.radius;
}

}  // namespace

void validate(const SceneObject& object) {
  const bool ok = std::visit(Overloaded{
                                 [](const Sphere& s) { return s.radius > 0.0; },
                                 [](const Box& b) { return (b.half_extents.array() > 0.0).all(); },
                                 [](const Disk& d) { return d.radius > 0.0 && d.normal.norm() > 0.0; },
                             },
                             object.shape);
  if (!ok) throw Error(ErrorKind::ConfigError, "object '" + object.id + "' has non-positive dimensions");
  if (!is_proper_rotation(object.pose.rotation)) {
    throw Error(ErrorKind::ConfigError, "object '" + object.id + "' pose is not a rotation");
  }
}

double bounding_radius(const Shape& shape) {
  return std::visit(Overloaded{
                        [](const Sphere& s) { return s.radius; },
                        [](const Box& b) { return b.half_extents.norm(); },
                        [](const Disk& d) { return d.radius; },
                    },
                    shape);
}

double reference_depth_z(const SceneObject& object) {
  return std::visit(Overloaded{
                        [&](const Sphere&) { return object.pose.translation.z(); },
                        [&](const Box& b) {
                          const Eigen::Vector3d z_row = object.pose.rotation.row(2).transpose();
                          return object.pose.translation.z() + z_row.cwiseAbs().dot(b.half_extents);
                        },
                        [&](const Disk&) { return object.pose.translation.z(); },
                    },
                    object.shape);
}

bool ray_hits(const SceneObject& object, const Eigen::Vector3d& origin, const Eigen::Vector3d& direction) {
  return std::visit(Overloaded{
                        [&](const Sphere& s) { return hits_sphere(s, object.pose, origin, direction); },
                        [&](const Box& b) { return hits_box(b, object.pose, origin, direction); },
                        [&](const Disk& d) { return hits_disk(d, object.pose, origin, direction); },
                    },
                    object.shape);
}

Scene::Scene(std::vector<SceneObject> objects) {
  for (auto& object : objects) add(std::move(object));
}

void Scene::add(SceneObject object) {
  validate(object);
  if (contains(object.id)) throw Error(ErrorKind::ConfigError, "duplicate object id '" + object.id + "'");
  objects_.push_back(std::move(object));
}

const SceneObject& Scene::object(std::string_view id) const {
  for (const auto& object : objects_) {
    if (object.id == id) return object;
  }
  throw Error(ErrorKind::UnknownObject, "no object '" + std::string(id) + "'");
}

bool Scene::contains(std::string_view id) const {
  return std::any_of(objects_.begin(), objects_.end(), [&](const SceneObject& o) { return o.id == id; });
}

void Scene::set_pose(std::string_view id, const Pose& pose) {
  for (auto& object : objects_) {
    if (object.id == id) {
      object.pose = pose;
      return;
    }
  }
  throw Error(ErrorKind::UnknownObject, "no object '" + std::string(id) + "'");
}

BinaryMask render_silhouette(const Scene& scene, const Pose& camera, const CameraModel& model,
                             std::string_view object_id) {
  return render_silhouette(scene.object(object_id), camera, model);
}

BinaryMask render_silhouette(const SceneObject& object, const Pose& camera, const CameraModel& model) {
  BinaryMask mask(model.width, model.height);

  // Pixel window from the projected corners of a cube bounding the object.
  // Perspective maps the convex cube to a convex region containing the
  // object's image, as long as every corner is in front of the camera.
  int x0 = 0, y0 = 0, x1 = model.width - 1, y1 = model.height - 1;
  const double r = bounding_radius(object.shape);
  const Eigen::Vector3d center_cam = camera.rotation.transpose() * (object.pose.translation - camera.translation);
  if (center_cam.z() + std::sqrt(3.0) * r <= 0.0) return mask;
  if (center_cam.z() - std::sqrt(3.0) * r > 1e-9) {
    double u_min = std::numeric_limits<double>::infinity(), u_max = -u_min;
    double v_min = u_min, v_max = -u_min;
    for (int corner = 0; corner < 8; ++corner) {
      const Eigen::Vector3d p = center_cam + r * Eigen::Vector3d(corner & 1 ? 1 : -1, corner & 2 ? 1 : -1,
                                                                 corner & 4 ? 1 : -1);
      const double u = model.principal_x + model.focal_px * p.x() / p.z();
      const double v = model.principal_y + model.focal_px * p.y() / p.z();
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
    const auto lo = [](double a) { return static_cast<int>(std::floor(a)) - 1; };
    const auto hi = [](double a) { return static_cast<int>(std::ceil(a)) + 1; };
    if (u_max < -1.0 || v_max < -1.0 || u_min > model.width || v_min > model.height) return mask;
    x0 = std::max(x0, lo(u_min));
    x1 = std::min(x1, hi(u_max));
    y0 = std::max(y0, lo(v_min));
    y1 = std::min(y1, hi(v_max));
  }

  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector3d dir = camera.rotation * pixel_ray(model, x, y);
      if (ray_hits(object, camera.translation, dir)) mask.set(x, y, true);
    }
  }
  return mask;
}

}  // namespace segservo
