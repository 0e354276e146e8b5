#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "strkit/image.hpp"
#include "strkit/slic.hpp"

namespace strkit {

inline constexpr int kHistBinsPerAxis = 8;
inline constexpr int kHistBins = kHistBinsPerAxis * kHistBinsPerAxis * kHistBinsPerAxis;

struct Region {
  std::int32_t id = 0;
  std::int64_t pixel_count = 0;
  std::array<double, 3> mean_lab{0, 0, 0};
  std::vector<float> histogram;  // kHistBins normalized Lab bins, sums to 1
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

struct RegionEdge {
  std::int32_t a = 0, b = 0;          // region ids, a < b
  std::int64_t shared_boundary_len = 0;  // 4-adjacent pixel pairs across the edge
  double color_dist = 0.0;            // Euclidean Lab distance between means
  double hist_dist = 0.0;             // chi-squared distance between histograms
};

/// Adjacency graph over the segments of a LabelMap. Keeps a copy of the
/// source map so merging can emit a relabeled raster.
struct RegionGraph {
  std::vector<Region> regions;
  std::vector<RegionEdge> edges;
  LabelMap source;
};

struct MergeConfig {
  double stage1_color_thresh = 8.0;   // Lab delta-E units
  double stage2_score_thresh = 0.35;
  double w_color = 0.5;
  double w_hist = 0.3;
  double w_boundary = 0.2;
};

struct MergeDiagnostics {
  std::size_t stage1_merges = 0;
  std::size_t stage2_merges = 0;
};

/// Chi-squared distance 0.5 * sum (p-q)^2/(p+q) over histogram bins;
/// in [0,1] for normalized inputs.
double chi_squared_distance(const std::vector<float>& p, const std::vector<float>& q);

/// One region per label with exact pixel counts, mean Lab, normalized
/// 8x8x8 Lab histogram and bbox; one edge per 4-adjacent label pair.
RegionGraph build_region_graph(const LabelMap& lm, const LabImage& img);

/// Two-stage agglomeration. Stage 1 repeatedly merges the adjacent pair with
/// the smallest mean-color distance while it stays below
/// stage1_color_thresh. Stage 2 merges pairs whose score
///   w_color*(color_dist/100) + w_hist*hist_dist
///     + w_boundary*(1 - boundary_len/perimeter_of_smaller)
/// stays below stage2_score_thresh. Region statistics are updated
/// incrementally; the result is a densely relabeled map.
LabelMap hierarchical_merge(const RegionGraph& g, const MergeConfig& cfg = {},
                            MergeDiagnostics* diag = nullptr);

}  // namespace strkit
