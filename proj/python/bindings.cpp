#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "strkit/color.hpp"
#include "strkit/config.hpp"
#include "strkit/imageio.hpp"
#include "strkit/manifest.hpp"
#include "strkit/mask_sampler.hpp"
#include "strkit/metrics.hpp"
#include "strkit/pipeline.hpp"
#include "strkit/region_merge.hpp"
#include "strkit/slic.hpp"

namespace py = pybind11;
using namespace strkit;

namespace {

// ---- numpy <-> raster conversions ------------------------------------------

RgbImage rgb_from_array(const py::array& arr) {
  auto a = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a || a.ndim() != 3 || a.shape(2) != 3)
    throw Error(ErrorCode::InvalidArgument, "expected a (H, W, 3) uint8 array");
  RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size());
  return img;
}

py::array rgb_to_array(const RgbImage& img) {
  py::array_t<std::uint8_t> a({img.height, img.width, 3});
  std::memcpy(a.mutable_data(), img.data.data(), img.data.size());
  return a;
}

GrayImage gray_from_array(const py::array& arr) {
  auto a = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a || a.ndim() != 2)
    throw Error(ErrorCode::InvalidArgument, "expected a (H, W) uint8 array");
  GrayImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size());
  return img;
}

py::array gray_to_array(const GrayImage& img) {
  py::array_t<std::uint8_t> a({img.height, img.width});
  std::memcpy(a.mutable_data(), img.data.data(), img.data.size());
  return a;
}

BinaryMask mask_from_array(const py::array& arr) {
  auto a = py::array_t<bool, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a || a.ndim() != 2)
    throw Error(ErrorCode::InvalidArgument, "expected a (H, W) bool array");
  BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  const bool* src = a.data();
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = src[i] ? 1 : 0;
  return m;
}

py::array mask_to_array(const BinaryMask& m) {
  py::array_t<bool> a({m.height, m.width});
  bool* dst = a.mutable_data();
  for (std::size_t i = 0; i < m.data.size(); ++i) dst[i] = m.data[i] != 0;
  return a;
}

LabImage lab_from_array(const py::array& arr) {
  auto a = py::array_t<float, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a || a.ndim() != 3 || a.shape(2) != 3)
    throw Error(ErrorCode::InvalidArgument, "expected a (H, W, 3) float32 array");
  LabImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(img.data.data(), a.data(), img.data.size() * sizeof(float));
  return img;
}

py::array lab_to_array(const LabImage& img) {
  py::array_t<float> a({img.height, img.width, 3});
  std::memcpy(a.mutable_data(), img.data.data(), img.data.size() * sizeof(float));
  return a;
}

LabelMap labels_from_array(const py::array& arr) {
  auto a = py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a || a.ndim() != 2)
    throw Error(ErrorCode::InvalidArgument, "expected a (H, W) int32 array");
  LabelMap lm;
  lm.width = static_cast<int>(a.shape(1));
  lm.height = static_cast<int>(a.shape(0));
  lm.labels.assign(a.data(), a.data() + lm.pixel_count());
  std::int32_t max_label = -1;
  for (const std::int32_t v : lm.labels) {
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "negative label");
    max_label = std::max(max_label, v);
  }
  lm.n_segments = max_label + 1;
  return lm;
}

py::array labels_to_array(const LabelMap& lm) {
  py::array_t<std::int32_t> a({lm.height, lm.width});
  std::memcpy(a.mutable_data(), lm.labels.data(), lm.labels.size() * sizeof(std::int32_t));
  return a;
}

ElementShape shape_of(const std::string& s) {
  if (s == "cross") return ElementShape::Cross;
  if (s == "square") return ElementShape::Square;
  throw Error(ErrorCode::InvalidArgument, "element shape must be 'cross' or 'square'");
}

Polarity polarity_of(const std::string& s) {
  if (s == "keep_background") return Polarity::KeepBackground;
  if (s == "keep_region") return Polarity::KeepRegion;
  throw Error(ErrorCode::InvalidArgument,
              "polarity must be 'keep_background' or 'keep_region'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "scene text mask refinement and text-removal evaluation toolkit";

  py::register_exception<Error>(m, "Error");

  // ---- configs --------------------------------------------------------------

  py::class_<RefineConfig>(m, "RefineConfig")
      .def(py::init([](int iterations, double upsample_factor, const std::string& element,
                       int radius, double binarize_threshold) {
             RefineConfig cfg;
             cfg.iterations = iterations;
             cfg.upsample_factor = upsample_factor;
             cfg.element = {shape_of(element), radius};
             cfg.binarize_threshold = binarize_threshold;
             return cfg;
           }),
           py::arg("iterations") = 2, py::arg("upsample_factor") = 2.0,
           py::arg("element") = "cross", py::arg("radius") = 1,
           py::arg("binarize_threshold") = 0.5)
      .def_readwrite("iterations", &RefineConfig::iterations)
      .def_readwrite("upsample_factor", &RefineConfig::upsample_factor)
      .def_readwrite("binarize_threshold", &RefineConfig::binarize_threshold)
      .def_property(
          "element",
          [](const RefineConfig& c) {
            return std::string(c.element.shape == ElementShape::Cross ? "cross" : "square");
          },
          [](RefineConfig& c, const std::string& s) { c.element.shape = shape_of(s); })
      .def_property(
          "radius", [](const RefineConfig& c) { return c.element.radius; },
          [](RefineConfig& c, int r) { c.element.radius = r; });

  py::class_<SlicParams>(m, "SlicParams")
      .def(py::init([](int k, double compactness, int max_iters, double min_region_frac) {
             return SlicParams{k, compactness, max_iters, min_region_frac};
           }),
           py::arg("k") = 400, py::arg("compactness") = 10.0, py::arg("max_iters") = 10,
           py::arg("min_region_frac") = 0.25)
      .def_readwrite("k", &SlicParams::k)
      .def_readwrite("compactness", &SlicParams::compactness_m)
      .def_readwrite("max_iters", &SlicParams::max_iters)
      .def_readwrite("min_region_frac", &SlicParams::min_region_frac);

  py::class_<MergeConfig>(m, "MergeConfig")
      .def(py::init([](double stage1_color_thresh, double stage2_score_thresh,
                       double w_color, double w_hist, double w_boundary) {
             return MergeConfig{stage1_color_thresh, stage2_score_thresh, w_color,
                                w_hist, w_boundary};
           }),
           py::arg("stage1_color_thresh") = 8.0, py::arg("stage2_score_thresh") = 0.35,
           py::arg("w_color") = 0.5, py::arg("w_hist") = 0.3, py::arg("w_boundary") = 0.2)
      .def_readwrite("stage1_color_thresh", &MergeConfig::stage1_color_thresh)
      .def_readwrite("stage2_score_thresh", &MergeConfig::stage2_score_thresh)
      .def_readwrite("w_color", &MergeConfig::w_color)
      .def_readwrite("w_hist", &MergeConfig::w_hist)
      .def_readwrite("w_boundary", &MergeConfig::w_boundary);

  py::class_<SelectConfig>(m, "SelectConfig")
      .def(py::init([](double overlap_thresh, std::int64_t min_seed_pixels,
                       int final_dilate_radius, std::int64_t containment_min_component) {
             return SelectConfig{overlap_thresh, min_seed_pixels, final_dilate_radius,
                                 containment_min_component};
           }),
           py::arg("overlap_thresh") = 0.30, py::arg("min_seed_pixels") = 1,
           py::arg("final_dilate_radius") = 2, py::arg("containment_min_component") = 24)
      .def_readwrite("overlap_thresh", &SelectConfig::overlap_thresh)
      .def_readwrite("min_seed_pixels", &SelectConfig::min_seed_pixels)
      .def_readwrite("final_dilate_radius", &SelectConfig::final_dilate_radius)
      .def_readwrite("containment_min_component", &SelectConfig::containment_min_component);

  py::class_<MrfConfig>(m, "MrfConfig")
      .def(py::init([](std::optional<RefineConfig> refine, std::optional<SlicParams> slic,
                       std::optional<MergeConfig> merge, std::optional<SelectConfig> select) {
             MrfConfig cfg;
             if (refine) cfg.refine = *refine;
             if (slic) cfg.slic = *slic;
             if (merge) cfg.merge = *merge;
             if (select) cfg.select = *select;
             return cfg;
           }),
           py::arg("refine") = py::none(), py::arg("slic") = py::none(),
           py::arg("merge") = py::none(), py::arg("select") = py::none())
      .def_readwrite("refine", &MrfConfig::refine)
      .def_readwrite("slic", &MrfConfig::slic)
      .def_readwrite("merge", &MrfConfig::merge)
      .def_readwrite("select", &MrfConfig::select);

  py::class_<MetricConfig>(m, "MetricConfig")
      .def(py::init([](int ep_threshold, double psnr_cap) {
             MetricConfig cfg;
             cfg.ep_threshold = ep_threshold;
             cfg.psnr_cap = psnr_cap;
             return cfg;
           }),
           py::arg("ep_threshold") = 20, py::arg("psnr_cap") = 100.0)
      .def_readwrite("ep_threshold", &MetricConfig::ep_threshold)
      .def_readwrite("psnr_cap", &MetricConfig::psnr_cap);

  // ---- image I/O and color --------------------------------------------------

  m.def("load_rgb", [](const std::filesystem::path& p) { return rgb_to_array(load_rgb(p)); },
        py::arg("path"), "Decode a PNG or JPEG into a (H, W, 3) uint8 array.");
  m.def("load_gray", [](const std::filesystem::path& p) { return gray_to_array(load_gray(p)); },
        py::arg("path"));
  m.def("load_mask", [](const std::filesystem::path& p) { return mask_to_array(load_mask(p)); },
        py::arg("path"), "Load a 0/255 mask PNG as a (H, W) bool array.");
  m.def("save_png",
        [](const std::filesystem::path& p, const py::array& arr) {
          if (arr.ndim() == 3) {
            save_png(p, rgb_from_array(arr));
          } else if (arr.ndim() == 2 && py::isinstance<py::array_t<bool>>(arr)) {
            save_png(p, mask_from_array(arr));
          } else if (arr.ndim() == 2) {
            save_png(p, gray_from_array(arr));
          } else {
            throw Error(ErrorCode::InvalidArgument, "unsupported array shape for PNG");
          }
        },
        py::arg("path"), py::arg("image"),
        "Save (H,W,3) uint8, (H,W) uint8 or (H,W) bool arrays as PNG.");
  m.def("save_label_png16",
        [](const std::filesystem::path& p, const py::array& labels) {
          save_label_png16(p, labels_from_array(labels));
        },
        py::arg("path"), py::arg("labels"));

  m.def("rgb_to_gray",
        [](const py::array& img) { return gray_to_array(rgb_to_gray(rgb_from_array(img))); },
        py::arg("image"));
  m.def("rgb_to_lab",
        [](const py::array& img) { return lab_to_array(rgb_to_lab(rgb_from_array(img))); },
        py::arg("image"));
  m.def("threshold",
        [](const py::array& img, int t) {
          if (t < 0 || t > 255)
            throw Error(ErrorCode::InvalidArgument, "threshold must be in [0, 255]");
          return mask_to_array(threshold(gray_from_array(img), static_cast<std::uint8_t>(t)));
        },
        py::arg("image"), py::arg("t"));
  m.def("overlay",
        [](const py::array& img, const py::array& mask,
           const std::array<std::uint8_t, 3>& color, double alpha) {
          return rgb_to_array(overlay(rgb_from_array(img), mask_from_array(mask), color, alpha));
        },
        py::arg("image"), py::arg("mask"),
        py::arg("color") = std::array<std::uint8_t, 3>{255, 0, 0}, py::arg("alpha") = 0.5);
  m.def("resize_bilinear",
        [](const py::array& img, int width, int height) {
          return rgb_to_array(resize_bilinear(rgb_from_array(img), width, height));
        },
        py::arg("image"), py::arg("width"), py::arg("height"));

  // ---- morphology and seed refinement ----------------------------------------

  m.def("erode",
        [](const py::array& mask, const std::string& element, int radius) {
          return mask_to_array(erode(mask_from_array(mask), {shape_of(element), radius}));
        },
        py::arg("mask"), py::arg("element") = "cross", py::arg("radius") = 1);
  m.def("dilate",
        [](const py::array& mask, const std::string& element, int radius) {
          return mask_to_array(dilate(mask_from_array(mask), {shape_of(element), radius}));
        },
        py::arg("mask"), py::arg("element") = "cross", py::arg("radius") = 1);
  m.def("resample_mask",
        [](const py::array& mask, int width, int height, double binarize_threshold) {
          return mask_to_array(
              resample_mask(mask_from_array(mask), width, height, binarize_threshold));
        },
        py::arg("mask"), py::arg("width"), py::arg("height"),
        py::arg("binarize_threshold") = 0.5);

  py::class_<SeedResult>(m, "SeedResult")
      .def_property_readonly("seed",
                             [](const SeedResult& r) { return mask_to_array(r.seed); })
      .def_property_readonly("stages", [](const SeedResult& r) {
        py::list out;
        for (const BinaryMask& s : r.stages) out.append(mask_to_array(s));
        return out;
      });
  m.def("refine_seed",
        [](const py::array& mask, const RefineConfig& cfg) {
          return refine_seed(mask_from_array(mask), cfg);
        },
        py::arg("mask"), py::arg("config") = RefineConfig{});

  // ---- superpixels and merging ------------------------------------------------

  m.def("slic",
        [](const py::array& lab, const SlicParams& params) {
          return labels_to_array(slic(lab_from_array(lab), params));
        },
        py::arg("lab"), py::arg("params") = SlicParams{},
        "SLIC superpixels over a (H, W, 3) float32 CIELAB array.");
  m.def("enforce_connectivity",
        [](const py::array& labels, const py::array& lab, double min_region_frac) {
          return labels_to_array(
              enforce_connectivity(labels_from_array(labels), lab_from_array(lab), min_region_frac));
        },
        py::arg("labels"), py::arg("lab"), py::arg("min_region_frac") = 0.25);
  m.def("hierarchical_merge",
        [](const py::array& labels, const py::array& lab, const MergeConfig& cfg) {
          const RegionGraph g = build_region_graph(labels_from_array(labels), lab_from_array(lab));
          return labels_to_array(hierarchical_merge(g, cfg));
        },
        py::arg("labels"), py::arg("lab"), py::arg("config") = MergeConfig{},
        "Two-stage agglomerative merge of a superpixel partition.");
  m.def("select_text_segments",
        [](const py::array& labels, const py::array& seed, const SelectConfig& cfg) {
          return mask_to_array(
              select_text_segments(labels_from_array(labels), mask_from_array(seed), cfg));
        },
        py::arg("labels"), py::arg("seed"), py::arg("config") = SelectConfig{});
  m.def("finalize_mask",
        [](const py::array& mask, const SelectConfig& cfg) {
          return mask_to_array(finalize_mask(mask_from_array(mask), cfg));
        },
        py::arg("mask"), py::arg("config") = SelectConfig{});

  py::class_<MrfOutput>(m, "MrfOutput")
      .def_property_readonly("final_mask",
                             [](const MrfOutput& o) { return mask_to_array(o.final_mask); })
      .def_property_readonly("seed", [](const MrfOutput& o) { return mask_to_array(o.seed); })
      .def_property_readonly("seed_stages",
                             [](const MrfOutput& o) {
                               py::list out;
                               for (const BinaryMask& s : o.seed_stages)
                                 out.append(mask_to_array(s));
                               return out;
                             })
      .def_property_readonly("superpixels",
                             [](const MrfOutput& o) { return labels_to_array(o.superpixels); })
      .def_property_readonly("merged",
                             [](const MrfOutput& o) { return labels_to_array(o.merged); })
      .def_property_readonly("selection",
                             [](const MrfOutput& o) { return mask_to_array(o.selection); });
  m.def("run_mrf",
        [](const py::array& img, const py::array& initial_mask, const MrfConfig& cfg) {
          return run_mrf(rgb_from_array(img), mask_from_array(initial_mask), cfg);
        },
        py::arg("image"), py::arg("initial_mask"), py::arg("config") = MrfConfig{},
        "Full mask refinement pipeline; returns all intermediates.");

  // ---- metrics ----------------------------------------------------------------

  py::class_<MetricValues>(m, "MetricValues")
      .def_readonly("psnr", &MetricValues::psnr)
      .def_readonly("mssim", &MetricValues::mssim)
      .def_readonly("mse", &MetricValues::mse)
      .def_readonly("age", &MetricValues::age)
      .def_readonly("peps", &MetricValues::peps)
      .def_readonly("pceps", &MetricValues::pceps)
      .def("as_dict",
           [](const MetricValues& v) {
             py::dict d;
             d["psnr"] = v.psnr;
             d["mssim"] = v.mssim;
             d["mse"] = v.mse;
             d["age"] = v.age;
             d["peps"] = v.peps;
             d["pceps"] = v.pceps;
             return d;
           })
      .def("__repr__", [](const MetricValues& v) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "MetricValues(psnr=%.4f, mssim=%.4f, mse=%.4f, age=%.4f, "
                      "peps=%.6f, pceps=%.6f)",
                      v.psnr, v.mssim, v.mse, v.age, v.peps, v.pceps);
        return std::string(buf);
      });

  auto pair_op = [](double (*fn)(const RgbImage&, const RgbImage&, const MetricConfig&)) {
    return [fn](const py::array& pred, const py::array& gt, const MetricConfig& cfg) {
      return fn(rgb_from_array(pred), rgb_from_array(gt), cfg);
    };
  };
  m.def("psnr", pair_op(&psnr), py::arg("pred"), py::arg("gt"),
        py::arg("config") = MetricConfig{});
  m.def("mssim", pair_op(&mssim), py::arg("pred"), py::arg("gt"),
        py::arg("config") = MetricConfig{});
  m.def("peps", pair_op(&peps), py::arg("pred"), py::arg("gt"),
        py::arg("config") = MetricConfig{});
  m.def("pceps", pair_op(&pceps), py::arg("pred"), py::arg("gt"),
        py::arg("config") = MetricConfig{});
  m.def("mse_percent",
        [](const py::array& pred, const py::array& gt) {
          return mse_percent(rgb_from_array(pred), rgb_from_array(gt));
        },
        py::arg("pred"), py::arg("gt"));
  m.def("age",
        [](const py::array& pred, const py::array& gt) {
          return age(rgb_from_array(pred), rgb_from_array(gt));
        },
        py::arg("pred"), py::arg("gt"));
  m.def("evaluate_pair",
        [](const py::array& pred, const py::array& gt, const MetricConfig& cfg) {
          return evaluate_pair(rgb_from_array(pred), rgb_from_array(gt), cfg);
        },
        py::arg("pred"), py::arg("gt"), py::arg("config") = MetricConfig{});
  m.def("evaluate_dataset",
        [](const std::vector<std::tuple<std::string, std::string, std::string>>& pairs,
           const MetricConfig& cfg, int threads) {
          std::vector<EvalPair> items;
          items.reserve(pairs.size());
          for (const auto& [id, pred, gt] : pairs) items.push_back({id, pred, gt});
          const MetricsReport report = evaluate_dataset(items, cfg, threads);
          py::list rows;
          for (const PairRecord& rec : report.per_pair) {
            py::dict row;
            row["id"] = rec.id;
            row["ok"] = rec.ok;
            if (rec.ok)
              row["values"] = py::cast(rec.values);
            else
              row["error"] = rec.error;
            rows.append(row);
          }
          py::dict out;
          out["per_pair"] = rows;
          out["aggregate"] = py::cast(report.aggregate);
          out["pair_count"] = report.pair_count;
          out["failure_count"] = report.failure_count;
          return out;
        },
        py::arg("pairs"), py::arg("config") = MetricConfig{}, py::arg("threads") = 1,
        "pairs: list of (id, pred_path, gt_path) tuples.");

  // ---- mask sampling ------------------------------------------------------------

  py::class_<MaskCorpus>(m, "MaskCorpus")
      .def(py::init([](const std::vector<std::string>& box,
                       const std::vector<std::string>& coarse,
                       const std::vector<std::string>& detailed) {
             MaskCorpus c;
             for (const auto& p : box) c.box_masks.emplace_back(p);
             for (const auto& p : coarse) c.coarse_masks.emplace_back(p);
             for (const auto& p : detailed) c.detailed_masks.emplace_back(p);
             return c;
           }),
           py::arg("box") = std::vector<std::string>{},
           py::arg("coarse") = std::vector<std::string>{},
           py::arg("detailed") = std::vector<std::string>{});
  m.def("load_corpus", &load_corpus, py::arg("path"));

  py::class_<MixRatios>(m, "MixRatios")
      .def(py::init([](double box, double coarse, double detailed) {
             return MixRatios{box, coarse, detailed};
           }),
           py::arg("box") = 0.20, py::arg("coarse") = 0.30, py::arg("detailed") = 0.50)
      .def_readwrite("box", &MixRatios::p_box)
      .def_readwrite("coarse", &MixRatios::p_coarse)
      .def_readwrite("detailed", &MixRatios::p_detailed);

  py::class_<SamplerState>(m, "SamplerState")
      .def(py::init([](std::uint64_t seed, std::uint64_t draw_count) {
             return SamplerState{seed, draw_count};
           }),
           py::arg("seed") = 0, py::arg("draw_count") = 0)
      .def_readwrite("seed", &SamplerState::rng_seed)
      .def_readwrite("draw_count", &SamplerState::draw_count);

  py::class_<MaskSampler>(m, "MaskSampler")
      .def(py::init<const MaskCorpus&, const MixRatios&, SamplerState>(), py::arg("corpus"),
           py::arg("ratios") = MixRatios{}, py::arg("state") = SamplerState{},
           py::keep_alive<1, 2>())
      .def("next",
           [](MaskSampler& s) {
             const MaskSampler::Draw d = s.next();
             return py::make_tuple(std::string(to_string(d.source)), d.path.string());
           },
           "Draw the next (source, path) pair without loading the file.")
      .def_property_readonly("state", &MaskSampler::state);

  m.def("sample_mask",
        [](const MaskCorpus& corpus, const MixRatios& ratios, SamplerState state) {
          const SampleResult r = sample_mask(corpus, ratios, state);
          return py::make_tuple(mask_to_array(r.mask), std::string(to_string(r.source)),
                                r.path.string(), r.state);
        },
        py::arg("corpus"), py::arg("ratios") = MixRatios{},
        py::arg("state") = SamplerState{});

  m.def("compose_reference",
        [](const py::array& img, const py::array& mask, const std::string& polarity) {
          return rgb_to_array(
              compose_reference(rgb_from_array(img), mask_from_array(mask), polarity_of(polarity)));
        },
        py::arg("image"), py::arg("mask"), py::arg("polarity") = "keep_background");
}
