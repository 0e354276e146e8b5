#include "strkit/color.hpp"

#include <cmath>

namespace strkit {
namespace {

inline double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
  constexpr double kEps = 216.0 / 24389.0;   // (6/29)^3
  constexpr double kKappa = 24389.0 / 27.0;  // (29/3)^3
  return t > kEps ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

constexpr double kXn = 0.95047;
constexpr double kZn = 1.08883;

}  // namespace

GrayImage rgb_to_gray(const RgbImage& img) {
  GrayImage out(img.width, img.height);
  const std::uint8_t* src = img.data.data();
  for (std::size_t i = 0; i < out.data.size(); ++i, src += 3) {
    const double y = 0.299 * src[0] + 0.587 * src[1] + 0.114 * src[2];
    long v = std::lround(y);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    out.data[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

LabImage rgb_to_lab(const RgbImage& img) {
  // the sRGB byte space is tiny, so linearization is table-driven
  static const auto linear_lut = [] {
    std::array<double, 256> lut{};
    for (int i = 0; i < 256; ++i) lut[i] = srgb_to_linear(i / 255.0);
    return lut;
  }();

  LabImage out(img.width, img.height);
  const std::uint8_t* src = img.data.data();
  float* dst = out.data.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i, src += 3, dst += 3) {
    const double r = linear_lut[src[0]];
    const double g = linear_lut[src[1]];
    const double b = linear_lut[src[2]];
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y);
    const double fz = lab_f(z / kZn);
    dst[0] = static_cast<float>(116.0 * fy - 16.0);
    dst[1] = static_cast<float>(500.0 * (fx - fy));
    dst[2] = static_cast<float>(200.0 * (fy - fz));
  }
  return out;
}

BinaryMask threshold(const GrayImage& img, std::uint8_t t) {
  BinaryMask out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = img.data[i] >= t ? 1 : 0;
  return out;
}

RgbImage overlay(const RgbImage& img, const BinaryMask& mask,
                 const std::array<std::uint8_t, 3>& color, double alpha) {
  if (img.width != mask.width || img.height != mask.height)
    throw Error(ErrorCode::DimensionMismatch, "overlay mask size differs from image");
  RgbImage out = img;
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    if (!mask.data[i]) continue;
    std::uint8_t* px = out.data.data() + i * 3;
    for (int c = 0; c < 3; ++c) {
      const double v = (1.0 - alpha) * px[c] + alpha * color[c];
      px[c] = static_cast<std::uint8_t>(std::floor(v + 0.5));  // half up
    }
  }
  return out;
}

}  // namespace strkit
