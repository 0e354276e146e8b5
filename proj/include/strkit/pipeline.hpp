#pragma once

#include "strkit/image.hpp"
#include "strkit/morphology.hpp"
#include "strkit/region_merge.hpp"
#include "strkit/slic.hpp"

namespace strkit {

struct SelectConfig {
  double overlap_thresh = 0.30;      // seed-overlap fraction of a segment, inclusive
  std::int64_t min_seed_pixels = 1;  // below this the selection is empty
  int final_dilate_radius = 2;       // square dilation of the final mask
  // seed components smaller than this do not trigger the containment rule;
  // keeps residual speckles in a noisy seed from selecting huge segments
  // (24 px ~= a 3px-wide stroke fragment 8px long)
  std::int64_t containment_min_component = 24;
};

/// Fraction of a 4-connected seed component that must land inside a single
/// segment for that segment to be selected regardless of its overlap ratio.
inline constexpr double kSeedComponentContainment = 0.8;

/// Union of whole segments that either overlap the seed by at least
/// overlap_thresh or contain >= kSeedComponentContainment of some
/// 4-connected seed component.
BinaryMask select_text_segments(const LabelMap& merged, const BinaryMask& seed,
                                const SelectConfig& cfg = {});

/// Square dilation by final_dilate_radius; radius 0 is the identity.
BinaryMask finalize_mask(const BinaryMask& selected, const SelectConfig& cfg = {});

struct MrfConfig {
  RefineConfig refine;
  SlicParams slic;
  MergeConfig merge;
  SelectConfig select;
};

/// Every intermediate of the refinement pipeline, kept for stage dumps
/// and overlay emission.
struct MrfOutput {
  std::vector<BinaryMask> seed_stages;  // one per refinement iteration
  BinaryMask seed;                      // == seed_stages.back() (or initial if 0 iters)
  LabelMap superpixels;
  LabelMap merged;
  BinaryMask selection;                 // pre-dilation segment union
  BinaryMask final_mask;
};

/// Full mask refinement: refine_seed -> rgb_to_lab -> slic ->
/// build_region_graph -> hierarchical_merge -> select_text_segments ->
/// finalize_mask. Stage failures are rethrown with the stage name attached.
MrfOutput run_mrf(const RgbImage& img, const BinaryMask& initial_mask,
                  const MrfConfig& cfg = {});

}  // namespace strkit
