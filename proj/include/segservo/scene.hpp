#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "segservo/camera.hpp"
#include "segservo/geometry.hpp"
#include "segservo/mask.hpp"

namespace segservo {

struct Sphere {
  double radius = 0.0;
};

struct Box {
  Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();
};

// Flat disk through the object origin; normal is given in the object frame.
struct Disk {
  double radius = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

using Shape = std::variant<Sphere, Box, Disk>;

struct SceneObject {
  std::string id;
  Shape shape;
  Pose pose;
};

void validate(const SceneObject& object);  // throws ConfigError

// Radius of a sphere about the object origin that contains the object.
double bounding_radius(const Shape& shape);

// World z used as the object's true depth for a camera looking straight
// down: top face for a box, the plane for a disk, the center for a sphere.
double reference_depth_z(const SceneObject& object);

// True when the ray origin + t * direction (t > 0) meets the solid.
bool ray_hits(const SceneObject& object, const Eigen::Vector3d& origin, const Eigen::Vector3d& direction);

class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<SceneObject> objects);

  void add(SceneObject object);
  const SceneObject& object(std::string_view id) const;  // throws UnknownObject
  bool contains(std::string_view id) const;
  void set_pose(std::string_view id, const Pose& pose);
  const std::vector<SceneObject>& objects() const noexcept { return objects_; }

 private:
  std::vector<SceneObject> objects_;
};

// One ray per pixel center; a pixel is labeled iff its ray meets the object.
BinaryMask render_silhouette(const Scene& scene, const Pose& camera, const CameraModel& model,
                             std::string_view object_id);
BinaryMask render_silhouette(const SceneObject& object, const Pose& camera, const CameraModel& model);

}  // namespace segservo
