#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strkit/error.hpp"

namespace strkit {

struct PairEntry {
  std::string id;
  std::filesystem::path input;
  std::filesystem::path gt;
  std::optional<std::filesystem::path> mask;  // initial text mask, if any
};

struct PairManifest {
  std::filesystem::path root;
  std::vector<PairEntry> entries;           // sorted by id
  std::vector<std::string> warnings;        // orphans etc., non-fatal
};

enum class Layout {
  FlatPairs,  // <id>.png + <id>_gt.png (+ optional <id>_mask.png)
  SplitDirs,  // identical filenames across images/, labels/, optional masks/
};

/// Walk a dataset root and pair files by the layout convention. Entries come
/// back sorted by id; unmatched files are reported in warnings.
PairManifest scan_layout(const std::filesystem::path& root, Layout layout);

/// JSON round-trip: {"root": ..., "entries": [{"id","input","gt","mask"?}]}.
/// Relative entry paths resolve against root on load.
PairManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const PairManifest& manifest, const std::filesystem::path& path);

struct ValidationIssue {
  std::string id;
  ErrorCode code = ErrorCode::IoError;
  std::string detail;
};

struct ValidationReport {
  std::size_t checked = 0;
  std::vector<ValidationIssue> failures;  // in entry order

  bool ok() const { return failures.empty(); }
};

/// Decode every referenced file and check input/gt (and mask, if present)
/// dimensions agree. Never throws for per-entry problems; the report
/// carries them.
ValidationReport validate(const PairManifest& manifest, int threads = 1);

}  // namespace strkit
