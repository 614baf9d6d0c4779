#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace segservo {

// Dense binary label grid, one bit per pixel, row-major.
//
// Pixel (col i, row j) has image coordinate (i, j) at the pixel center:
// (0, 0) is the top-left pixel, x grows rightward and y grows downward.
// The renderer, the camera model and every s* target share this convention.
class BinaryMask {
 public:
  BinaryMask(int width, int height);

  // Labels must be exactly 0 or 1 and have width * height entries.
  static BinaryMask from_labels(int width, int height, std::span<const std::uint8_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  bool get(int x, int y) const noexcept {
    const std::size_t i = index(x, y);
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(int x, int y, bool value) noexcept {
    const std::size_t i = index(x, y);
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      bits_[i >> 6] |= bit;
    } else {
      bits_[i >> 6] &= ~bit;
    }
  }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  bool none() const noexcept;
  std::vector<std::uint8_t> labels() const;

  // Packed storage; bits past pixel_count() are always zero.
  std::span<const std::uint64_t> words() const noexcept { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint64_t> bits_;
};

struct FeatureVector {
  double s_x = 0.0;
  double s_y = 0.0;
};

struct OverlapCounts {
  std::int64_t intersection = 0;
  std::int64_t union_count = 0;
};

// Segmentation area s_A: number of labeled pixels.
std::int64_t area(const BinaryMask& mask);

// Mean labeled-pixel coordinate (s_x, s_y), sub-pixel. Throws EmptyMask.
FeatureVector centroid(const BinaryMask& mask);

// Throws DimensionMismatch.
OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b);

// Intersection over union. Throws DimensionMismatch, EmptyUnion.
double jaccard(const BinaryMask& a, const BinaryMask& b);

// Plain PBM (P1): magic, width, height, then the 0/1 grid one row per line.
void write_pbm(std::ostream& out, const BinaryMask& mask);
BinaryMask read_pbm(std::istream& in);

}  // namespace segservo
