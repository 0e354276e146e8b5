#include "strkit/morphology.hpp"

#include <algorithm>
#include <cmath>

namespace strkit {
namespace {

void check_element(const BinaryMask& mask, const StructuringElement& se) {
  if (se.radius < 1)
    throw Error(ErrorCode::InvalidArgument, "structuring element radius must be >= 1");
  if (mask.width < 2 * se.radius + 1 || mask.height < 2 * se.radius + 1)
    throw Error(ErrorCode::MaskTooSmall, "mask smaller than structuring element");
}

// erode=true: all covered pixels true (out of bounds counts false);
// erode=false: any covered pixel true.
BinaryMask apply_cross(const BinaryMask& m, int r, bool erode_op) {
  BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      bool acc = erode_op;
      for (int d = -r; d <= r && acc == erode_op; ++d) {
        // horizontal arm, then vertical arm (center visited twice, harmless)
        const int xs = x + d;
        const bool hx = xs >= 0 && xs < m.width && m.at(xs, y);
        const int ys = y + d;
        const bool hy = ys >= 0 && ys < m.height && m.at(x, ys);
        if (erode_op)
          acc = hx && hy;
        else
          acc = hx || hy;
      }
      out.set(x, y, acc);
    }
  }
  return out;
}

// separable: horizontal window pass then vertical
BinaryMask apply_square(const BinaryMask& m, int r, bool erode_op) {
  BinaryMask tmp(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      bool acc = erode_op;
      for (int d = -r; d <= r && acc == erode_op; ++d) {
        const int xs = x + d;
        const bool v = xs >= 0 && xs < m.width && m.at(xs, y);
        acc = erode_op ? (acc && v) : (acc || v);
      }
      tmp.set(x, y, acc);
    }
  }
  BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      bool acc = erode_op;
      for (int d = -r; d <= r && acc == erode_op; ++d) {
        const int ys = y + d;
        const bool v = ys >= 0 && ys < m.height && tmp.at(x, ys);
        acc = erode_op ? (acc && v) : (acc || v);
      }
      out.set(x, y, acc);
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  check_element(mask, se);
  return se.shape == ElementShape::Cross ? apply_cross(mask, se.radius, true)
                                         : apply_square(mask, se.radius, true);
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  check_element(mask, se);
  return se.shape == ElementShape::Cross ? apply_cross(mask, se.radius, false)
                                         : apply_square(mask, se.radius, false);
}

BinaryMask resample_mask(const BinaryMask& mask, int target_w, int target_h,
                         double binarize_threshold) {
  if (target_w < 1 || target_h < 1)
    throw Error(ErrorCode::InvalidArgument, "resample target must be >= 1 pixel");
  if (target_w == mask.width && target_h == mask.height) return mask;

  BinaryMask out(target_w, target_h);
  const double sx = static_cast<double>(mask.width) / target_w;
  const double sy = static_cast<double>(mask.height) / target_h;
  for (int y = 0; y < target_h; ++y) {
    // pixel-center mapping, sample positions clamped to the source grid
    const double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    if (y0 < 0) { y0 = 0; wy = 0.0; }
    if (y0 >= mask.height - 1) { y0 = mask.height - 1; wy = 0.0; }
    const int y1 = std::min(y0 + 1, mask.height - 1);
    for (int x = 0; x < target_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      if (x0 < 0) { x0 = 0; wx = 0.0; }
      if (x0 >= mask.width - 1) { x0 = mask.width - 1; wx = 0.0; }
      const int x1 = std::min(x0 + 1, mask.width - 1);
      const double v00 = mask.at(x0, y0), v10 = mask.at(x1, y0);
      const double v01 = mask.at(x0, y1), v11 = mask.at(x1, y1);
      const double v = (1 - wy) * ((1 - wx) * v00 + wx * v10) +
                       wy * ((1 - wx) * v01 + wx * v11);
      out.set(x, y, v >= binarize_threshold);
    }
  }
  return out;
}

SeedResult refine_seed(const BinaryMask& initial, const RefineConfig& cfg) {
  if (cfg.iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "refine iterations must be >= 1");
  if (cfg.upsample_factor <= 1.0)
    throw Error(ErrorCode::InvalidArgument, "upsample factor must be > 1");

  SeedResult result;
  result.stages.reserve(cfg.iterations);
  BinaryMask current = initial;
  const int up_w = std::max(1, static_cast<int>(std::lround(initial.width * cfg.upsample_factor)));
  const int up_h = std::max(1, static_cast<int>(std::lround(initial.height * cfg.upsample_factor)));
  for (int i = 0; i < cfg.iterations; ++i) {
    BinaryMask up = resample_mask(current, up_w, up_h, cfg.binarize_threshold);
    BinaryMask eroded = erode(up, cfg.element);
    current = resample_mask(eroded, initial.width, initial.height, cfg.binarize_threshold);
    result.stages.push_back(current);
  }
  result.seed = result.stages.back();
  return result;
}

}  // namespace strkit
