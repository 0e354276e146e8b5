#include "strkit/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace strkit {
namespace {

using nlohmann::json;

// strict section reader: unknown keys are config errors, matching the CLI's
// unknown-flag behavior
class Section {
 public:
  Section(const json& j, const char* name) : name_(name) {
    if (j.contains(name)) obj_ = &j.at(name);
    if (obj_ && !obj_->is_object())
      throw Error(ErrorCode::InvalidArgument,
                  std::string("config section '") + name + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& dst) {
    known_.insert(key);
    if (obj_ && obj_->contains(key)) {
      try {
        dst = obj_->at(key).get<T>();
      } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("config key '") + name_ + "." + key + "' has the wrong type");
      }
    }
  }

  void finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items())
      if (!known_.count(key))
        throw Error(ErrorCode::InvalidArgument,
                    std::string("unknown config key '") + name_ + "." + key + "'");
  }

 private:
  const char* name_;
  const json* obj_ = nullptr;
  std::set<std::string> known_;
};

ElementShape shape_from_string(const std::string& s) {
  if (s == "cross") return ElementShape::Cross;
  if (s == "square") return ElementShape::Square;
  throw Error(ErrorCode::InvalidArgument,
              "element shape must be 'cross' or 'square', got '" + s + "'");
}

}  // namespace

ToolConfig load_tool_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "config: " + std::string(e.what()));
  }
  if (!j.is_object())
    throw Error(ErrorCode::InvalidArgument, "config root must be an object");

  static const std::set<std::string> sections = {"refine", "slic", "merge",
                                                 "select", "metrics"};
  for (const auto& [key, value] : j.items())
    if (!sections.count(key))
      throw Error(ErrorCode::InvalidArgument, "unknown config section '" + key + "'");

  ToolConfig cfg;

  Section refine(j, "refine");
  refine.get("iterations", cfg.mrf.refine.iterations);
  refine.get("upsample_factor", cfg.mrf.refine.upsample_factor);
  std::string shape = cfg.mrf.refine.element.shape == ElementShape::Cross ? "cross" : "square";
  refine.get("element", shape);
  cfg.mrf.refine.element.shape = shape_from_string(shape);
  refine.get("radius", cfg.mrf.refine.element.radius);
  refine.get("binarize_threshold", cfg.mrf.refine.binarize_threshold);
  refine.finish();

  Section slic(j, "slic");
  slic.get("k", cfg.mrf.slic.k);
  slic.get("compactness", cfg.mrf.slic.compactness_m);
  slic.get("max_iters", cfg.mrf.slic.max_iters);
  slic.get("min_region_frac", cfg.mrf.slic.min_region_frac);
  slic.finish();

  Section merge(j, "merge");
  merge.get("stage1_color_thresh", cfg.mrf.merge.stage1_color_thresh);
  merge.get("stage2_score_thresh", cfg.mrf.merge.stage2_score_thresh);
  merge.get("w_color", cfg.mrf.merge.w_color);
  merge.get("w_hist", cfg.mrf.merge.w_hist);
  merge.get("w_boundary", cfg.mrf.merge.w_boundary);
  merge.finish();

  Section select(j, "select");
  select.get("overlap_thresh", cfg.mrf.select.overlap_thresh);
  select.get("min_seed_pixels", cfg.mrf.select.min_seed_pixels);
  select.get("final_dilate_radius", cfg.mrf.select.final_dilate_radius);
  select.get("containment_min_component", cfg.mrf.select.containment_min_component);
  select.finish();

  Section metrics(j, "metrics");
  metrics.get("ep_threshold", cfg.metrics.ep_threshold);
  metrics.get("psnr_cap", cfg.metrics.psnr_cap);
  metrics.finish();

  return cfg;
}

std::string tool_config_to_json(const ToolConfig& cfg) {
  json j;
  j["refine"] = {
      {"iterations", cfg.mrf.refine.iterations},
      {"upsample_factor", cfg.mrf.refine.upsample_factor},
      {"element", cfg.mrf.refine.element.shape == ElementShape::Cross ? "cross" : "square"},
      {"radius", cfg.mrf.refine.element.radius},
      {"binarize_threshold", cfg.mrf.refine.binarize_threshold},
  };
  j["slic"] = {
      {"k", cfg.mrf.slic.k},
      {"compactness", cfg.mrf.slic.compactness_m},
      {"max_iters", cfg.mrf.slic.max_iters},
      {"min_region_frac", cfg.mrf.slic.min_region_frac},
  };
  j["merge"] = {
      {"stage1_color_thresh", cfg.mrf.merge.stage1_color_thresh},
      {"stage2_score_thresh", cfg.mrf.merge.stage2_score_thresh},
      {"w_color", cfg.mrf.merge.w_color},
      {"w_hist", cfg.mrf.merge.w_hist},
      {"w_boundary", cfg.mrf.merge.w_boundary},
  };
  j["select"] = {
      {"overlap_thresh", cfg.mrf.select.overlap_thresh},
      {"min_seed_pixels", cfg.mrf.select.min_seed_pixels},
      {"final_dilate_radius", cfg.mrf.select.final_dilate_radius},
      {"containment_min_component", cfg.mrf.select.containment_min_component},
  };
  j["metrics"] = {
      {"ep_threshold", cfg.metrics.ep_threshold},
      {"psnr_cap", cfg.metrics.psnr_cap},
  };
  return j.dump(2);
}

}  // namespace strkit
