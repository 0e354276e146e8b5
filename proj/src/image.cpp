#include "strkit/image.hpp"

#include <algorithm>
#include <cmath>

namespace strkit {

RgbImage resize_bilinear(const RgbImage& img, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1)
    throw Error(ErrorCode::InvalidArgument, "resize target must be >= 1 pixel");
  if (target_w == img.width && target_h == img.height) return img;

  RgbImage out(target_w, target_h);
  const double sx = static_cast<double>(img.width) / target_w;
  const double sy = static_cast<double>(img.height) / target_h;
  for (int y = 0; y < target_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    if (y0 < 0) { y0 = 0; wy = 0.0; }
    if (y0 >= img.height - 1) { y0 = img.height - 1; wy = 0.0; }
    const int y1 = std::min(y0 + 1, img.height - 1);
    for (int x = 0; x < target_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      if (x0 < 0) { x0 = 0; wx = 0.0; }
      if (x0 >= img.width - 1) { x0 = img.width - 1; wx = 0.0; }
      const int x1 = std::min(x0 + 1, img.width - 1);
      const std::uint8_t* p00 = img.pixel(x0, y0);
      const std::uint8_t* p10 = img.pixel(x1, y0);
      const std::uint8_t* p01 = img.pixel(x0, y1);
      const std::uint8_t* p11 = img.pixel(x1, y1);
      std::uint8_t* dst = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - wy) * ((1 - wx) * p00[c] + wx * p10[c]) +
                         wy * ((1 - wx) * p01[c] + wx * p11[c]);
        dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

}  // namespace strkit
