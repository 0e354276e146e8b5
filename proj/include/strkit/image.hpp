#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strkit/error.hpp"

namespace strkit {

/// Dense 8-bit sRGB raster, row-major RGB triples.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width*height*3 bytes

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
    if (w < 1 || h < 1)
      throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t idx(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::uint8_t* pixel(int x, int y) { return data.data() + idx(x, y); }
  const std::uint8_t* pixel(int x, int y) const { return data.data() + idx(x, y); }

  bool same_size(const RgbImage& o) const { return width == o.width && height == o.height; }
  bool operator==(const RgbImage&) const = default;
};

/// Dense 8-bit grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width*height bytes

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1)
      throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  std::uint8_t at(int x, int y) const { return data[idx(x, y)]; }
  void set(int x, int y, std::uint8_t v) { data[idx(x, y)] = v; }

  bool operator==(const GrayImage&) const = default;
};

/// CIELAB raster, row-major L,a,b triples. L in [0,100], a/b roughly
/// [-128,127] for 8-bit sRGB inputs.
struct LabImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // width*height*3 floats

  LabImage() = default;
  LabImage(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0f) {
    if (w < 1 || h < 1)
      throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t idx(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
  float* pixel(int x, int y) { return data.data() + idx(x, y); }
  const float* pixel(int x, int y) const { return data.data() + idx(x, y); }
};

/// Per-pixel boolean raster; true (stored as 1) marks text/foreground.
/// Bytes instead of vector<bool> so rows can be scanned and shared cheaply.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1 per pixel

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
    if (w < 1 || h < 1)
      throw Error(ErrorCode::InvalidArgument, "mask dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool at(int x, int y) const { return data[idx(x, y)] != 0; }
  void set(int x, int y, bool v) { data[idx(x, y)] = v ? 1 : 0; }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint8_t v : data) n += v != 0;
    return n;
  }

  bool same_size(const BinaryMask& o) const { return width == o.width && height == o.height; }
  bool operator==(const BinaryMask&) const = default;
};

inline void require_same_size(const RgbImage& a, const RgbImage& b) {
  if (!a.same_size(b))
    throw Error(ErrorCode::DimensionMismatch, "image dimensions differ");
}

/// Bilinear resize with pixel-center mapping; used by the CLI --resize-to
/// path to normalize datasets onto a common working resolution.
RgbImage resize_bilinear(const RgbImage& img, int target_w, int target_h);

}  // namespace strkit
