#pragma once

#include <cstdint>
#include <vector>

#include "strkit/image.hpp"

namespace strkit {

/// Row-major raster of segment ids. Ids are dense: every value in
/// [0, n_segments) occurs at least once and nothing else does.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  std::int32_t n_segments = 0;

  LabelMap() = default;
  LabelMap(int w, int h)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0), n_segments(1) {
    if (w < 1 || h < 1)
      throw Error(ErrorCode::InvalidArgument, "label map dimensions must be >= 1");
  }

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  std::int32_t at(int x, int y) const { return labels[idx(x, y)]; }

  bool operator==(const LabelMap&) const = default;
};

struct SlicParams {
  int k = 400;                   // desired superpixel count
  double compactness_m = 10.0;   // spatial weight m
  int max_iters = 10;
  double min_region_frac = 0.25; // fragments below frac*S^2 get absorbed
};

/// Per-run diagnostics; objective[i] is the sum of assignment distances D^2
/// after iteration i. Non-increasing by construction.
struct SlicDiagnostics {
  std::vector<double> objective;
  int iterations_run = 0;
};

/// SLIC superpixels over CIELAB+xy. Deterministic: fixed seeding grid,
/// fixed scan order, ties resolved to the lowest center index.
LabelMap slic(const LabImage& img, const SlicParams& params = {},
              SlicDiagnostics* diag = nullptr);

/// Split labels into 4-connected components, absorb components smaller than
/// min_region_frac * (N / n_segments) into the neighbor with nearest mean Lab
/// color, and renumber densely in scan order.
LabelMap enforce_connectivity(const LabelMap& lm, const LabImage& img,
                              double min_region_frac);

}  // namespace strkit
