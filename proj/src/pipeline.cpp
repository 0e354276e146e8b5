#include "strkit/pipeline.hpp"

#include <string>
#include <vector>

#include "strkit/color.hpp"

namespace strkit {

BinaryMask select_text_segments(const LabelMap& merged, const BinaryMask& seed,
                                const SelectConfig& cfg) {
  if (merged.width != seed.width || merged.height != seed.height)
    throw Error(ErrorCode::DimensionMismatch, "seed size differs from label map");

  BinaryMask out(merged.width, merged.height);
  if (static_cast<std::int64_t>(seed.popcount()) < cfg.min_seed_pixels) return out;

  const std::int32_t n = merged.n_segments;
  std::vector<std::int64_t> segment_size(n, 0);
  std::vector<std::int64_t> segment_seed(n, 0);
  for (std::size_t i = 0; i < merged.labels.size(); ++i) {
    segment_size[merged.labels[i]]++;
    if (seed.data[i]) segment_seed[merged.labels[i]]++;
  }

  std::vector<char> selected(n, 0);
  for (std::int32_t s = 0; s < n; ++s) {
    if (segment_seed[s] == 0) continue;
    const double ratio = static_cast<double>(segment_seed[s]) / segment_size[s];
    if (ratio >= cfg.overlap_thresh) selected[s] = 1;
  }

  // a segment also qualifies when it swallows (nearly) a whole 4-connected
  // seed component; thin strokes inside big segments hit this rule
  const int w = merged.width, h = merged.height;
  std::vector<char> visited(seed.data.size(), 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> members;
  for (std::size_t start = 0; start < seed.data.size(); ++start) {
    if (!seed.data[start] || visited[start]) continue;
    stack.clear();
    members.clear();
    stack.push_back(start);
    visited[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      members.push_back(i);
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t nb[4] = {i - 1, i + 1, i - w, i + w};
      const bool ok[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int d = 0; d < 4; ++d) {
        if (ok[d] && seed.data[nb[d]] && !visited[nb[d]]) {
          visited[nb[d]] = 1;
          stack.push_back(nb[d]);
        }
      }
    }
    if (static_cast<std::int64_t>(members.size()) < cfg.containment_min_component)
      continue;
    std::vector<std::int64_t> per_segment(n, 0);
    for (std::size_t i : members) per_segment[merged.labels[i]]++;
    const double need = kSeedComponentContainment * static_cast<double>(members.size());
    for (std::int32_t s = 0; s < n; ++s)
      if (per_segment[s] > 0 && static_cast<double>(per_segment[s]) >= need)
        selected[s] = 1;
  }

  for (std::size_t i = 0; i < merged.labels.size(); ++i)
    out.data[i] = selected[merged.labels[i]];
  return out;
}

BinaryMask finalize_mask(const BinaryMask& selected, const SelectConfig& cfg) {
  if (cfg.final_dilate_radius < 0)
    throw Error(ErrorCode::InvalidArgument, "dilate radius must be >= 0");
  if (cfg.final_dilate_radius == 0) return selected;
  return dilate(selected, {ElementShape::Square, cfg.final_dilate_radius});
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " stage: " + e.what());
  }
}

}  // namespace

MrfOutput run_mrf(const RgbImage& img, const BinaryMask& initial_mask,
                  const MrfConfig& cfg) {
  if (img.width != initial_mask.width || img.height != initial_mask.height)
    throw Error(ErrorCode::DimensionMismatch, "initial mask size differs from image");

  MrfOutput out;
  SeedResult seed = stage("refine_seed", [&] { return refine_seed(initial_mask, cfg.refine); });
  out.seed_stages = std::move(seed.stages);
  out.seed = std::move(seed.seed);

  const LabImage lab = stage("rgb_to_lab", [&] { return rgb_to_lab(img); });
  out.superpixels = stage("slic", [&] { return slic(lab, cfg.slic); });
  const RegionGraph graph =
      stage("build_region_graph", [&] { return build_region_graph(out.superpixels, lab); });
  out.merged = stage("hierarchical_merge", [&] { return hierarchical_merge(graph, cfg.merge); });
  out.selection = stage("select_text_segments",
                        [&] { return select_text_segments(out.merged, out.seed, cfg.select); });
  out.final_mask = stage("finalize_mask", [&] { return finalize_mask(out.selection, cfg.select); });
  return out;
}

}  // namespace strkit
