#pragma once

#include <array>
#include <cmath>

#include "strkit/image.hpp"

namespace strkit {

/// BT.601 luma: round(0.299 R + 0.587 G + 0.114 B), clamped to [0,255].
GrayImage rgb_to_gray(const RgbImage& img);

/// sRGB (D65) -> linear -> XYZ -> CIELAB.
LabImage rgb_to_lab(const RgbImage& img);

/// Pixel is true iff intensity >= t.
BinaryMask threshold(const GrayImage& img, std::uint8_t t);

/// Blend `color` over masked pixels: round((1-alpha)*src + alpha*color),
/// half rounded up. Unmasked pixels pass through.
RgbImage overlay(const RgbImage& img, const BinaryMask& mask,
                 const std::array<std::uint8_t, 3>& color, double alpha);

/// Euclidean distance in Lab space between two L,a,b triples.
inline double lab_distance(const float* p, const float* q) {
  const double dl = static_cast<double>(p[0]) - q[0];
  const double da = static_cast<double>(p[1]) - q[1];
  const double db = static_cast<double>(p[2]) - q[2];
  return std::sqrt(dl * dl + da * da + db * db);
}

}  // namespace strkit
