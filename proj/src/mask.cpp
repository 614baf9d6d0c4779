#include "segservo/mask.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <string>

#include "segservo/error.hpp"

namespace segservo {

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::InvalidArgument, "mask dimensions must be positive");
  }
  bits_.assign((pixel_count() + 63) / 64, 0);
}

BinaryMask BinaryMask::from_labels(int width, int height, std::span<const std::uint8_t> labels) {
  BinaryMask mask(width, height);
  if (labels.size() != mask.pixel_count()) {
    throw Error(ErrorKind::DimensionMismatch, "label count does not match width x height");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw Error(ErrorKind::InvalidArgument, "labels must be 0 or 1");
    if (labels[i]) mask.bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return mask;
}

bool BinaryMask::none() const noexcept {
  for (const auto word : bits_) {
    if (word) return false;
  }
  return true;
}

std::vector<std::uint8_t> BinaryMask::labels() const {
  std::vector<std::uint8_t> out(pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (bits_[i >> 6] >> (i & 63)) & 1u;
  return out;
}

std::int64_t area(const BinaryMask& mask) {
  std::int64_t count = 0;
  for (const auto word : mask.words()) count += std::popcount(word);
  return count;
}

FeatureVector centroid(const BinaryMask& mask) {
  const auto words = mask.words();
  const auto width = static_cast<std::uint64_t>(mask.width());
  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;
  std::uint64_t count = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    std::uint64_t word = words[k];
    while (word) {
      const std::uint64_t index = k * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
      sum_x += index % width;
      sum_y += index / width;
      ++count;
      word &= word - 1;
    }
  }
  if (count == 0) throw Error(ErrorKind::EmptyMask, "centroid of an empty mask");
  const auto n = static_cast<double>(count);
  return {static_cast<double>(sum_x) / n, static_cast<double>(sum_y) / n};
}

OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::DimensionMismatch, "masks differ in size");
  }
  OverlapCounts counts;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t k = 0; k < wa.size(); ++k) {
    counts.intersection += std::popcount(wa[k] & wb[k]);
    counts.union_count += std::popcount(wa[k] | wb[k]);
  }
  return counts;
}

double jaccard(const BinaryMask& a, const BinaryMask& b) {
  const auto counts = overlap(a, b);
  if (counts.union_count == 0) throw Error(ErrorKind::EmptyUnion, "jaccard of two empty masks");
  return static_cast<double>(counts.intersection) / static_cast<double>(counts.union_count);
}

void write_pbm(std::ostream& out, const BinaryMask& mask) {
  out << "P1\n" << mask.width() << ' ' << mask.height() << '\n';
  std::string row;
  for (int y = 0; y < mask.height(); ++y) {
    row.clear();
    for (int x = 0; x < mask.width(); ++x) {
      if (x) row.push_back(' ');
      row.push_back(mask.get(x, y) ? '1' : '0');
    }
    out << row << '\n';
  }
}

namespace {

// Next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  char c = 0;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

}  // namespace

BinaryMask read_pbm(std::istream& in) {
  if (next_token(in) != "P1") throw Error(ErrorKind::ParseError, "expected P1 header");
  int width = 0;
  int height = 0;
  try {
    width = std::stoi(next_token(in));
    height = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad PBM dimensions");
  }
  BinaryMask mask(width, height);
  // P1 permits packed digits, so read character by character.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      char c = 0;
      do {
        if (!in.get(c)) throw Error(ErrorKind::ParseError, "truncated PBM grid");
        if (c == '#') {
          std::string discard;
          std::getline(in, discard);
          c = ' ';
        }
      } while (std::isspace(static_cast<unsigned char>(c)));
      if (c != '0' && c != '1') throw Error(ErrorKind::ParseError, "PBM labels must be 0 or 1");
      mask.set(x, y, c == '1');
    }
  }
  return mask;
}

}  // namespace segservo
