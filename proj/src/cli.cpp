#include "strkit/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strkit/color.hpp"
#include "strkit/config.hpp"
#include "strkit/imageio.hpp"
#include "strkit/manifest.hpp"
#include "strkit/mask_sampler.hpp"
#include "strkit/metrics.hpp"
#include "strkit/parallel.hpp"
#include "strkit/pipeline.hpp"

namespace strkit {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

struct GlobalOpts {
  int threads = 1;
  std::uint64_t seed = 0;
  std::string config_path;
};

// mask of pixels whose label differs from the right or down neighbor
BinaryMask label_boundaries(const LabelMap& lm) {
  BinaryMask b(lm.width, lm.height);
  for (int y = 0; y < lm.height; ++y)
    for (int x = 0; x < lm.width; ++x) {
      const std::int32_t v = lm.at(x, y);
      if ((x + 1 < lm.width && lm.at(x + 1, y) != v) ||
          (y + 1 < lm.height && lm.at(x, y + 1) != v))
        b.set(x, y, true);
    }
  return b;
}

constexpr std::array<std::uint8_t, 3> kMaskColor = {255, 0, 0};
constexpr std::array<std::uint8_t, 3> kBoundaryColor = {0, 255, 0};

void emit_stages(const fs::path& out_dir, const std::string& id,
                 const RgbImage& img, const MrfOutput& result) {
  int stage = 1;
  auto mask_stage = [&](const BinaryMask& m) {
    const std::string base = id + "_stage" + std::to_string(stage);
    save_png(out_dir / (base + ".png"), m);
    save_png(out_dir / (base + "_overlay.png"), overlay(img, m, kMaskColor, 0.5));
    stage++;
  };
  auto label_stage = [&](const LabelMap& lm) {
    const std::string base = id + "_stage" + std::to_string(stage);
    save_label_png16(out_dir / (base + ".png"), lm);
    save_png(out_dir / (base + "_overlay.png"),
             overlay(img, label_boundaries(lm), kBoundaryColor, 1.0));
    stage++;
  };
  for (const BinaryMask& m : result.seed_stages) mask_stage(m);
  label_stage(result.superpixels);
  label_stage(result.merged);
  mask_stage(result.selection);
  mask_stage(result.final_mask);
}

int cmd_refine(const std::string& manifest_path, const std::string& out_dir,
               bool stages, int resize_to, const ToolConfig& cfg,
               const GlobalOpts& global) {
  const PairManifest manifest = load_manifest(manifest_path);
  fs::create_directories(out_dir);

  for (const std::string& w : manifest.warnings) std::cerr << "warning: " << w << "\n";

  std::vector<std::string> errors(manifest.entries.size());
  std::atomic<std::size_t> failed{0};
  parallel_for_index(manifest.entries.size(), global.threads, [&](std::size_t i) {
    const PairEntry& e = manifest.entries[i];
    try {
      if (!e.mask)
        throw Error(ErrorCode::InvalidArgument, "entry has no initial mask path");
      RgbImage img = load_rgb(e.input);
      BinaryMask initial = load_mask(*e.mask);
      if (resize_to > 0) {
        img = resize_bilinear(img, resize_to, resize_to);
        initial = resample_mask(initial, resize_to, resize_to, 0.5);
      }
      const MrfOutput result = run_mrf(img, initial, cfg.mrf);
      save_png(fs::path(out_dir) / (e.id + "_mrf.png"), result.final_mask);
      if (stages) emit_stages(out_dir, e.id, img, result);
    } catch (const Error& err) {
      errors[i] = err.what();
      failed.fetch_add(1);
    }
  });

  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      std::cerr << "warning: " << manifest.entries[i].id << " skipped: " << errors[i] << "\n";
  std::cout << "refine: " << (manifest.entries.size() - failed) << " processed, "
            << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_evaluate(const std::string& pred_dir, const std::string& manifest_path,
                 const std::string& out_csv, const ToolConfig& cfg,
                 const GlobalOpts& global) {
  const PairManifest manifest = load_manifest(manifest_path);
  std::vector<EvalPair> pairs;
  pairs.reserve(manifest.entries.size());
  for (const PairEntry& e : manifest.entries)
    pairs.push_back({e.id, fs::path(pred_dir) / (e.id + ".png"), e.gt});

  const MetricsReport report = evaluate_dataset(pairs, cfg.metrics, global.threads);

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_csv);
    write_report_csv(report, out);
  }
  for (const PairRecord& rec : report.per_pair)
    if (!rec.ok) std::cerr << "warning: " << rec.id << ": " << rec.error << "\n";
  std::cout << format_report_table(report);
  return report.failure_count == 0 ? kExitOk : kExitPartial;
}

int cmd_sample_masks(const std::string& corpus_path, std::size_t count,
                     const std::string& out_dir, const GlobalOpts& global) {
  const MaskCorpus corpus = load_corpus(corpus_path);
  if (corpus.box_masks.empty() || corpus.coarse_masks.empty() ||
      corpus.detailed_masks.empty())
    std::cerr << "warning: corpus has empty categories; ratios renormalized\n";

  fs::create_directories(out_dir);
  MaskSampler sampler(corpus, MixRatios{}, SamplerState{global.seed, 0});

  std::ostringstream csv;
  csv << "index,source,file\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const MaskSampler::Draw draw = sampler.next();
    char name[64];
    std::snprintf(name, sizeof(name), "mask_%05zu_%s.png", i, to_string(draw.source));
    try {
      save_png(fs::path(out_dir) / name, load_mask(draw.path));
      csv << i << ',' << to_string(draw.source) << ',' << name << "\n";
    } catch (const Error& e) {
      std::cerr << "warning: sample " << i << ": " << e.what() << "\n";
      csv << i << ',' << to_string(draw.source) << ",FAILED\n";
      failed++;
    }
  }
  const fs::path csv_path = fs::path(out_dir) / "samples.csv";
  std::ofstream out(csv_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + csv_path.string());
  out << csv.str();
  std::cout << "sample-masks: " << (count - failed) << " written, " << failed
            << " failed\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_overlay(const std::string& image_path, const std::string& mask_path,
                const std::string& out_path, const std::vector<int>& color,
                double alpha) {
  const RgbImage img = load_rgb(image_path);
  const BinaryMask mask = load_mask(mask_path);
  const std::array<std::uint8_t, 3> rgb = {
      static_cast<std::uint8_t>(color[0]), static_cast<std::uint8_t>(color[1]),
      static_cast<std::uint8_t>(color[2])};
  save_png(out_path, overlay(img, mask, rgb, alpha));
  std::cout << "overlay: wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& manifest_path, const std::string& root,
                 const std::string& layout_name, const std::string& write_manifest,
                 const GlobalOpts& global) {
  PairManifest manifest;
  if (!manifest_path.empty()) {
    manifest = load_manifest(manifest_path);
  } else {
    const Layout layout =
        layout_name == "split_dirs" ? Layout::SplitDirs : Layout::FlatPairs;
    manifest = scan_layout(root, layout);
  }
  for (const std::string& w : manifest.warnings) std::cerr << "warning: " << w << "\n";

  const ValidationReport report = validate(manifest, global.threads);
  for (const ValidationIssue& issue : report.failures)
    std::cerr << issue.id << ": " << to_string(issue.code) << ": " << issue.detail << "\n";
  std::cout << "validate: " << report.checked << " entries, "
            << report.failures.size() << " failures\n";

  if (!write_manifest.empty()) save_manifest(manifest, write_manifest);
  return report.ok() ? kExitOk : kExitPartial;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"scene text mask refinement and text-removal evaluation toolkit"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--threads", global.threads, "worker threads for batch commands")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "RNG seed for sampling commands");
  auto* config_opt =
      app.add_option("--config", global.config_path, "JSON config overriding module defaults");

  ToolConfig cfg;  // defaults; file and flags layered on after parse

  // dotted flags mirror the JSON config one-to-one
  struct FlagBinding {
    CLI::Option* opt;
    std::function<void(ToolConfig&)> apply;
  };
  std::vector<FlagBinding> bindings;
  auto bind = [&](CLI::Option* opt, std::function<void(ToolConfig&)> apply) {
    bindings.push_back({opt, std::move(apply)});
  };

  int refine_iterations = 0, refine_radius = 0;
  double refine_upsample = 0, refine_binthresh = 0;
  std::string refine_element;
  int slic_k = 0, slic_iters = 0;
  double slic_m = 0, slic_minfrac = 0;
  double merge_s1 = 0, merge_s2 = 0, merge_wc = 0, merge_wh = 0, merge_wb = 0;
  double select_overlap = 0;
  std::int64_t select_minseed = 0, select_mincomp = 0;
  int select_dilate = 0;
  int metrics_ep = 0;
  double metrics_cap = 0;

  bind(app.add_option("--refine.iterations", refine_iterations),
       [&](ToolConfig& c) { c.mrf.refine.iterations = refine_iterations; });
  bind(app.add_option("--refine.upsample_factor", refine_upsample),
       [&](ToolConfig& c) { c.mrf.refine.upsample_factor = refine_upsample; });
  bind(app.add_option("--refine.element", refine_element)
           ->check(CLI::IsMember({"cross", "square"})),
       [&](ToolConfig& c) {
         c.mrf.refine.element.shape =
             refine_element == "square" ? ElementShape::Square : ElementShape::Cross;
       });
  bind(app.add_option("--refine.radius", refine_radius),
       [&](ToolConfig& c) { c.mrf.refine.element.radius = refine_radius; });
  bind(app.add_option("--refine.binarize_threshold", refine_binthresh),
       [&](ToolConfig& c) { c.mrf.refine.binarize_threshold = refine_binthresh; });
  bind(app.add_option("--slic.k", slic_k),
       [&](ToolConfig& c) { c.mrf.slic.k = slic_k; });
  bind(app.add_option("--slic.compactness", slic_m),
       [&](ToolConfig& c) { c.mrf.slic.compactness_m = slic_m; });
  bind(app.add_option("--slic.max_iters", slic_iters),
       [&](ToolConfig& c) { c.mrf.slic.max_iters = slic_iters; });
  bind(app.add_option("--slic.min_region_frac", slic_minfrac),
       [&](ToolConfig& c) { c.mrf.slic.min_region_frac = slic_minfrac; });
  bind(app.add_option("--merge.stage1_color_thresh", merge_s1),
       [&](ToolConfig& c) { c.mrf.merge.stage1_color_thresh = merge_s1; });
  bind(app.add_option("--merge.stage2_score_thresh", merge_s2),
       [&](ToolConfig& c) { c.mrf.merge.stage2_score_thresh = merge_s2; });
  bind(app.add_option("--merge.w_color", merge_wc),
       [&](ToolConfig& c) { c.mrf.merge.w_color = merge_wc; });
  bind(app.add_option("--merge.w_hist", merge_wh),
       [&](ToolConfig& c) { c.mrf.merge.w_hist = merge_wh; });
  bind(app.add_option("--merge.w_boundary", merge_wb),
       [&](ToolConfig& c) { c.mrf.merge.w_boundary = merge_wb; });
  bind(app.add_option("--select.overlap_thresh", select_overlap),
       [&](ToolConfig& c) { c.mrf.select.overlap_thresh = select_overlap; });
  bind(app.add_option("--select.min_seed_pixels", select_minseed),
       [&](ToolConfig& c) { c.mrf.select.min_seed_pixels = select_minseed; });
  bind(app.add_option("--select.final_dilate_radius", select_dilate),
       [&](ToolConfig& c) { c.mrf.select.final_dilate_radius = select_dilate; });
  bind(app.add_option("--select.containment_min_component", select_mincomp),
       [&](ToolConfig& c) { c.mrf.select.containment_min_component = select_mincomp; });
  bind(app.add_option("--metrics.ep_threshold", metrics_ep)
           ->check(CLI::Range(1, 254)),
       [&](ToolConfig& c) { c.metrics.ep_threshold = metrics_ep; });
  bind(app.add_option("--metrics.psnr_cap", metrics_cap),
       [&](ToolConfig& c) { c.metrics.psnr_cap = metrics_cap; });
  // common alias from the evaluation literature
  auto* ep_alias = app.add_option("--ep-threshold", metrics_ep)->check(CLI::Range(1, 254));
  bind(ep_alias, [&](ToolConfig& c) { c.metrics.ep_threshold = metrics_ep; });

  // refine
  auto* refine = app.add_subcommand("refine", "run mask refinement over a manifest");
  std::string refine_manifest, refine_out;
  bool refine_stages = false;
  int refine_resize = 0;
  refine->add_option("--manifest", refine_manifest, "pair manifest JSON")->required();
  refine->add_option("--out-dir", refine_out, "output directory")->required();
  refine->add_flag("--emit-stages", refine_stages, "write per-stage PNGs and overlays");
  refine->add_option("--resize-to", refine_resize,
                     "resize inputs to NxN before refinement (0 keeps native size)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "six-metric evaluation of predictions");
  std::string eval_pred, eval_manifest, eval_csv;
  evaluate->add_option("--pred-dir", eval_pred, "directory of <id>.png predictions")->required();
  evaluate->add_option("--manifest", eval_manifest, "pair manifest JSON")->required();
  evaluate->add_option("--out-csv", eval_csv, "CSV report path");

  // sample-masks
  auto* sample = app.add_subcommand("sample-masks", "draw a training-mask stream from a corpus");
  std::string sample_corpus, sample_out;
  std::size_t sample_count = 0;
  sample->add_option("--corpus", sample_corpus, "corpus manifest JSON")->required();
  sample->add_option("--count", sample_count, "number of masks to draw")->required();
  sample->add_option("--out-dir", sample_out, "output directory")->required();

  // overlay
  auto* over = app.add_subcommand("overlay", "blend a mask over an image");
  std::string over_img, over_mask, over_out;
  std::vector<int> over_color = {255, 0, 0};
  double over_alpha = 0.5;
  over->add_option("--image", over_img)->required();
  over->add_option("--mask", over_mask)->required();
  over->add_option("--out", over_out)->required();
  over->add_option("--color", over_color, "overlay color R G B")
      ->expected(3)
      ->check(CLI::Range(0, 255));
  over->add_option("--alpha", over_alpha)->check(CLI::Range(0.0, 1.0));

  // validate
  auto* val = app.add_subcommand("validate", "scan and validate a dataset");
  std::string val_manifest, val_root, val_layout = "flat_pairs", val_write;
  val->add_option("--manifest", val_manifest, "existing manifest JSON");
  val->add_option("--root", val_root, "dataset root to scan");
  val->add_option("--layout", val_layout, "flat_pairs or split_dirs")
      ->check(CLI::IsMember({"flat_pairs", "split_dirs"}));
  val->add_option("--write-manifest", val_write, "save the scanned manifest here");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (config_opt->count()) cfg = load_tool_config(global.config_path);
    for (const FlagBinding& b : bindings)
      if (b.opt->count()) b.apply(cfg);

    if (refine->parsed())
      return cmd_refine(refine_manifest, refine_out, refine_stages, refine_resize,
                        cfg, global);
    if (evaluate->parsed())
      return cmd_evaluate(eval_pred, eval_manifest, eval_csv, cfg, global);
    if (sample->parsed())
      return cmd_sample_masks(sample_corpus, sample_count, sample_out, global);
    if (over->parsed())
      return cmd_overlay(over_img, over_mask, over_out, over_color, over_alpha);
    if (val->parsed()) {
      if (val_manifest.empty() && val_root.empty())
        throw Error(ErrorCode::InvalidArgument, "validate needs --manifest or --root");
      return cmd_validate(val_manifest, val_root, val_layout, val_write, global);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace strkit
