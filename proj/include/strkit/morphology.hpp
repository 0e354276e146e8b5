#pragma once

#include <vector>

#include "strkit/image.hpp"

namespace strkit {

enum class ElementShape { Cross, Square };

struct StructuringElement {
  ElementShape shape = ElementShape::Cross;
  int radius = 1;  // >= 1
};

/// Pixel stays true iff every pixel under the element is true; positions
/// outside the mask count as false, so the foreground shrinks at borders.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);

/// Pixel becomes true iff any pixel under the element is true.
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);

/// Bilinear resampling of the 0/1 field followed by >= threshold binarization.
BinaryMask resample_mask(const BinaryMask& mask, int target_w, int target_h,
                         double binarize_threshold);

struct RefineConfig {
  int iterations = 2;
  double upsample_factor = 2.0;
  StructuringElement element{ElementShape::Cross, 1};
  double binarize_threshold = 0.5;
};

struct SeedResult {
  BinaryMask seed;                  // equals stages.back()
  std::vector<BinaryMask> stages;   // one entry per refinement iteration
};

/// Iterative seed refinement: per iteration the mask is upsampled by
/// cfg.upsample_factor, eroded with cfg.element, and resampled back to the
/// original size. Intermediates are kept in order.
SeedResult refine_seed(const BinaryMask& initial, const RefineConfig& cfg = {});

}  // namespace strkit
