#pragma once

// Independent reference implementations and fixtures shared by the tests.
// The oracles deliberately avoid the library's packed-bit fast paths.

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "segservo/mask.hpp"
#include "segservo/scene_config.hpp"

namespace segservo::oracle {

inline std::filesystem::path data_dir() { return SEGSERVO_DATA_DIR; }

inline const SceneDescription& hsr_scene() {
  static const SceneDescription scene = load_scene_file(data_dir() / "scenes" / "hsr_like.yaml");
  return scene;
}

// Random mask: density drawn per mask, optionally with a few solid rectangles
// so both speckle and blob-like shapes appear.
inline BinaryMask random_mask(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double density = unit(rng) * unit(rng);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& l : labels) l = unit(rng) < density ? 1 : 0;
  std::uniform_int_distribution<int> count(0, 3);
  const int rects = count(rng);
  for (int r = 0; r < rects; ++r) {
    std::uniform_int_distribution<int> xs(0, width - 1);
    std::uniform_int_distribution<int> ys(0, height - 1);
    int x0 = xs(rng), x1 = xs(rng), y0 = ys(rng), y1 = ys(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) labels[static_cast<std::size_t>(y) * width + x] = 1;
    }
  }
  return BinaryMask::from_labels(width, height, labels);
}

inline std::int64_t naive_area(const BinaryMask& m) {
  std::int64_t n = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) n += m.get(x, y) ? 1 : 0;
  }
  return n;
}

// Mean of labeled pixel coordinates with integer sums, divided once.
inline FeatureVector naive_centroid(const BinaryMask& m) {
  long long sx = 0;
  long long sy = 0;
  long long n = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.get(x, y)) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  return {static_cast<double>(sx) / static_cast<double>(n), static_cast<double>(sy) / static_cast<double>(n)};
}

inline OverlapCounts naive_overlap(const BinaryMask& a, const BinaryMask& b) {
  OverlapCounts c;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const bool p = a.get(x, y);
      const bool q = b.get(x, y);
      c.intersection += (p && q) ? 1 : 0;
      c.union_count += (p || q) ? 1 : 0;
    }
  }
  return c;
}

}  // namespace segservo::oracle
