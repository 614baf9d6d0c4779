#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "segservo/camera.hpp"
#include "segservo/mask.hpp"
#include "segservo/scene.hpp"

namespace segservo {

// Segmentation error model standing in for a learned VOS network. Applied in
// a fixed order: boundary morphology, pixel dropout, false-positive blobs.
struct NoiseModel {
  std::uint64_t seed = 0;
  int boundary_morph = 0;      // pixels; < 0 erodes, > 0 dilates
  double dropout_prob = 0.0;   // chance that a labeled pixel is lost
  double blob_rate = 0.0;      // expected false-positive blobs per frame
  double blob_radius_min = 2.0;
  double blob_radius_max = 6.0;

  void validate() const;  // throws ConfigError
  bool neutral() const noexcept { return boundary_morph == 0 && dropout_prob == 0.0 && blob_rate == 0.0; }
};

BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);

// Noise for one frame. Depends only on (noise, frame_index), never on call
// history, so any frame can be regenerated.
BinaryMask apply_noise(const BinaryMask& clean, const NoiseModel& noise, std::uint64_t frame_index);

BinaryMask segment(const Scene& scene, const Pose& camera, const CameraModel& model, std::string_view object_id,
                   const NoiseModel& noise, std::uint64_t frame_index);

// The perception interface the control loop consumes.
class SegmentationSource {
 public:
  virtual ~SegmentationSource() = default;
  virtual BinaryMask segment(const Pose& camera, std::uint64_t frame_index) const = 0;
};

// Non-owning: the scene must outlive the segmenter.
class SimulatedSegmenter final : public SegmentationSource {
 public:
  SimulatedSegmenter(const Scene& scene, CameraModel model, std::string object_id, NoiseModel noise);

  BinaryMask segment(const Pose& camera, std::uint64_t frame_index) const override;
  const Scene& scene() const noexcept { return *scene_; }

 private:
  const Scene* scene_;
  CameraModel model_;
  std::string object_id_;
  NoiseModel noise_;
};

}  // namespace segservo
