#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "strkit/image.hpp"

namespace strkit {

enum class MaskSource { Box, CoarseStroke, DetailedStroke };

const char* to_string(MaskSource s);

/// Mask files grouped by provenance: axis-aligned box masks, coarse stroke
/// masks, and detailed stroke masks.
struct MaskCorpus {
  std::vector<std::filesystem::path> box_masks;
  std::vector<std::filesystem::path> coarse_masks;
  std::vector<std::filesystem::path> detailed_masks;

  bool empty() const {
    return box_masks.empty() && coarse_masks.empty() && detailed_masks.empty();
  }
};

/// Corpus manifest JSON: {"root": optional, "box": [...], "coarse": [...],
/// "detailed": [...]}; relative entries resolve against root.
MaskCorpus load_corpus(const std::filesystem::path& manifest);

struct MixRatios {
  double p_box = 0.20;
  double p_coarse = 0.30;
  double p_detailed = 0.50;
};

/// Throws RatioInvalid unless ratios are non-negative and sum to 1 (1e-9).
void validate_ratios(const MixRatios& ratios);

/// Reproducibility handle: the PRNG is mt19937_64 (algorithm pinned for
/// cross-run determinism) and every sample consumes exactly two raw draws,
/// so (seed, draw_count) fully determines the sequence position.
struct SamplerState {
  std::uint64_t rng_seed = 0;
  std::uint64_t draw_count = 0;
};

/// Streaming sampler over a corpus. Categories with empty lists get
/// probability zero and the remaining mass is renormalized.
class MaskSampler {
 public:
  struct Draw {
    MaskSource source;
    std::filesystem::path path;
  };

  MaskSampler(const MaskCorpus& corpus, const MixRatios& ratios,
              SamplerState state = {});

  /// Pick the next (category, file); does not load the file.
  Draw next();

  SamplerState state() const { return state_; }

 private:
  const MaskCorpus& corpus_;
  MixRatios ratios_;
  SamplerState state_;
  std::mt19937_64 engine_;
};

struct SampleResult {
  BinaryMask mask;
  MaskSource source;
  std::filesystem::path path;
  SamplerState state;  // advanced state
};

/// One draw as a pure function of (corpus, ratios, state): loads the chosen
/// mask and returns the advanced state. Equivalent to MaskSampler::next()
/// starting from the same state.
SampleResult sample_mask(const MaskCorpus& corpus, const MixRatios& ratios,
                         SamplerState state);

enum class Polarity {
  KeepBackground,  // zero out masked (text) pixels
  KeepRegion,      // zero out everything but the masked pixels
};

/// Per-pixel multiply of the image by the {0,1} mask under the chosen
/// polarity.
RgbImage compose_reference(const RgbImage& img, const BinaryMask& mask,
                           Polarity polarity);

}  // namespace strkit
