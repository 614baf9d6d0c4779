#include "segservo/perception.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "segservo/error.hpp"

namespace segservo {

void NoiseModel::validate() const {
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw Error(ErrorKind::ConfigError, "dropout_prob must lie in [0, 1]");
  }
  if (!(blob_rate >= 0.0)) throw Error(ErrorKind::ConfigError, "blob_rate must be non-negative");
  if (!(blob_radius_min > 0.0 && blob_radius_min <= blob_radius_max)) {
    throw Error(ErrorKind::ConfigError, "blob radius range must satisfy 0 < min <= max");
  }
}

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t frame_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out = mask;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      for (const auto& [dx, dy] : offsets) {
        if (out.contains(x + dx, y + dy)) out.set(x + dx, y + dy, true);
      }
    }
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      bool keep = true;
      for (const auto& [dx, dy] : offsets) {
        if (!mask.contains(x + dx, y + dy) || !mask.get(x + dx, y + dy)) {
          keep = false;
          break;
        }
      }
      if (keep) out.set(x, y, true);
    }
  }
  return out;
}

BinaryMask apply_noise(const BinaryMask& clean, const NoiseModel& noise, std::uint64_t frame_index) {
  if (noise.neutral()) return clean;
  noise.validate();
  BinaryMask mask = noise.boundary_morph > 0   ? dilate(clean, noise.boundary_morph)
                    : noise.boundary_morph < 0 ? erode(clean, -noise.boundary_morph)
                                               : clean;
  auto rng = frame_rng(noise.seed, frame_index);

  if (noise.dropout_prob > 0.0) {
    std::bernoulli_distribution drop(noise.dropout_prob);
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (mask.get(x, y) && drop(rng)) mask.set(x, y, false);
      }
    }
  }

  if (noise.blob_rate > 0.0) {
    std::poisson_distribution<int> count_dist(noise.blob_rate);
    std::uniform_real_distribution<double> u_dist(0.0, mask.width());
    std::uniform_real_distribution<double> v_dist(0.0, mask.height());
    std::uniform_real_distribution<double> radius_dist(noise.blob_radius_min, noise.blob_radius_max);
    std::uniform_real_distribution<double> angle_dist(0.0, std::numbers::pi);
    const int count = count_dist(rng);
    for (int i = 0; i < count; ++i) {
      const double cu = u_dist(rng);
      const double cv = v_dist(rng);
      const double a = radius_dist(rng);
      const double b = radius_dist(rng);
      const double theta = angle_dist(rng);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double reach = std::max(a, b);
      const int x0 = std::max(0, static_cast<int>(std::floor(cu - reach)));
      const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(cu + reach)));
      const int y0 = std::max(0, static_cast<int>(std::floor(cv - reach)));
      const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(cv + reach)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double du = x - cu;
          const double dv = y - cv;
          const double p = (c * du + s * dv) / a;
          const double q = (-s * du + c * dv) / b;
          if (p * p + q * q <= 1.0) mask.set(x, y, true);
        }
      }
    }
  }
  return mask;
}

BinaryMask segment(const Scene& scene, const Pose& camera, const CameraModel& model, std::string_view object_id,
                   const NoiseModel& noise, std::uint64_t frame_index) {
  return apply_noise(render_silhouette(scene, camera, model, object_id), noise, frame_index);
}

SimulatedSegmenter::SimulatedSegmenter(const Scene& scene, CameraModel model, std::string object_id,
                                       NoiseModel noise)
    : scene_(&scene), model_(model), object_id_(std::move(object_id)), noise_(noise) {
  if (!scene.contains(object_id_)) throw Error(ErrorKind::UnknownObject, "no object '" + object_id_ + "'");
  noise_.validate();
}

BinaryMask SimulatedSegmenter::segment(const Pose& camera, std::uint64_t frame_index) const {
  return ::segservo::segment(*scene_, camera, model_, object_id_, noise_, frame_index);
}

}  // namespace segservo
