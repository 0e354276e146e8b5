#include "strkit/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "strkit/imageio.hpp"
#include "strkit/parallel.hpp"

namespace strkit {
namespace {

using nlohmann::json;

bool has_image_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

PairManifest scan_flat(const std::filesystem::path& root) {
  std::map<std::string, std::filesystem::path> inputs, gts, masks;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file() || !has_image_ext(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    if (ends_with(stem, "_gt")) {
      gts.emplace(stem.substr(0, stem.size() - 3), entry.path());
    } else if (ends_with(stem, "_mask")) {
      masks.emplace(stem.substr(0, stem.size() - 5), entry.path());
    } else {
      inputs.emplace(stem, entry.path());
    }
  }

  PairManifest m;
  m.root = root;
  for (const auto& [id, input] : inputs) {
    auto gt = gts.find(id);
    if (gt == gts.end()) {
      m.warnings.push_back("no ground truth for " + id);
      continue;
    }
    PairEntry e;
    e.id = id;
    e.input = input;
    e.gt = gt->second;
    if (auto mk = masks.find(id); mk != masks.end()) e.mask = mk->second;
    m.entries.push_back(std::move(e));
  }
  for (const auto& [id, gt] : gts)
    if (!inputs.count(id)) m.warnings.push_back("ground truth without input: " + id);
  for (const auto& [id, mk] : masks)
    if (!inputs.count(id)) m.warnings.push_back("mask without input: " + id);
  return m;
}

PairManifest scan_split(const std::filesystem::path& root) {
  const auto images_dir = root / "images";
  const auto labels_dir = root / "labels";
  const auto masks_dir = root / "masks";
  if (!std::filesystem::is_directory(images_dir) ||
      !std::filesystem::is_directory(labels_dir))
    throw Error(ErrorCode::NoPairsFound,
                "split_dirs layout needs images/ and labels/ under " + root.string());

  std::map<std::string, std::filesystem::path> images;
  for (const auto& entry : std::filesystem::directory_iterator(images_dir))
    if (entry.is_regular_file() && has_image_ext(entry.path()))
      images.emplace(entry.path().filename().string(), entry.path());

  PairManifest m;
  m.root = root;
  for (const auto& [name, input] : images) {
    const auto gt = labels_dir / name;
    if (!std::filesystem::exists(gt)) {
      m.warnings.push_back("no label for " + name);
      continue;
    }
    PairEntry e;
    e.id = std::filesystem::path(name).stem().string();
    e.input = input;
    e.gt = gt;
    if (const auto mk = masks_dir / name; std::filesystem::exists(mk)) e.mask = mk;
    m.entries.push_back(std::move(e));
  }
  if (std::filesystem::is_directory(labels_dir))
    for (const auto& entry : std::filesystem::directory_iterator(labels_dir))
      if (entry.is_regular_file() && has_image_ext(entry.path()) &&
          !images.count(entry.path().filename().string()))
        m.warnings.push_back("label without image: " + entry.path().filename().string());
  return m;
}

std::string relativized(const std::filesystem::path& p, const std::filesystem::path& root) {
  std::error_code ec;
  const auto rel = std::filesystem::relative(p, root, ec);
  if (!ec && !rel.empty() && rel.native()[0] != '.') return rel.generic_string();
  return p.generic_string();
}

std::filesystem::path resolved(const std::filesystem::path& p,
                               const std::filesystem::path& root) {
  return p.is_absolute() ? p : root / p;
}

}  // namespace

PairManifest scan_layout(const std::filesystem::path& root, Layout layout) {
  if (!std::filesystem::is_directory(root))
    throw Error(ErrorCode::RootMissing, root.string());
  PairManifest m = layout == Layout::FlatPairs ? scan_flat(root) : scan_split(root);
  std::sort(m.entries.begin(), m.entries.end(),
            [](const PairEntry& a, const PairEntry& b) { return a.id < b.id; });
  if (m.entries.empty())
    throw Error(ErrorCode::NoPairsFound, "no image pairs under " + root.string());
  return m;
}

PairManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::DecodeError, "manifest: " + std::string(e.what()));
  }

  PairManifest m;
  try {
    std::filesystem::path root = j.value("root", std::string("."));
    m.root = root.is_absolute() ? root : path.parent_path() / root;
    std::set<std::string> seen;
    for (const auto& item : j.at("entries")) {
      PairEntry e;
      e.id = item.at("id").get<std::string>();
      if (!seen.insert(e.id).second)
        throw Error(ErrorCode::InvalidArgument, "duplicate id in manifest: " + e.id);
      e.input = resolved(item.at("input").get<std::string>(), m.root);
      e.gt = resolved(item.at("gt").get<std::string>(), m.root);
      if (item.contains("mask"))
        e.mask = resolved(item.at("mask").get<std::string>(), m.root);
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::DecodeError, "manifest: " + std::string(e.what()));
  }
  return m;
}

void save_manifest(const PairManifest& manifest, const std::filesystem::path& path) {
  json entries = json::array();
  for (const PairEntry& e : manifest.entries) {
    json item;
    item["id"] = e.id;
    item["input"] = relativized(e.input, manifest.root);
    item["gt"] = relativized(e.gt, manifest.root);
    if (e.mask) item["mask"] = relativized(*e.mask, manifest.root);
    entries.push_back(std::move(item));
  }
  json j;
  j["root"] = manifest.root.generic_string();
  j["entries"] = std::move(entries);

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

ValidationReport validate(const PairManifest& manifest, int threads) {
  ValidationReport report;
  report.checked = manifest.entries.size();
  std::vector<std::vector<ValidationIssue>> issues(manifest.entries.size());

  parallel_for_index(manifest.entries.size(), threads, [&](std::size_t i) {
    const PairEntry& e = manifest.entries[i];
    auto add = [&](ErrorCode code, const std::string& detail) {
      issues[i].push_back({e.id, code, detail});
    };
    RgbImage input, gt;
    bool input_ok = false, gt_ok = false;
    try {
      input = load_rgb(e.input);
      input_ok = true;
    } catch (const Error& err) {
      add(err.code(), "input: " + std::string(err.what()));
    }
    try {
      gt = load_rgb(e.gt);
      gt_ok = true;
    } catch (const Error& err) {
      add(err.code(), "gt: " + std::string(err.what()));
    }
    if (input_ok && gt_ok && !input.same_size(gt))
      add(ErrorCode::DimensionMismatch, "input and gt dimensions differ");
    if (e.mask) {
      try {
        const BinaryMask mask = load_mask(*e.mask);
        if (input_ok && (mask.width != input.width || mask.height != input.height))
          add(ErrorCode::DimensionMismatch, "mask dimensions differ from input");
      } catch (const Error& err) {
        add(err.code(), "mask: " + std::string(err.what()));
      }
    }
  });

  for (auto& list : issues)
    for (auto& issue : list) report.failures.push_back(std::move(issue));
  return report;
}

}  // namespace strkit
