#include "strkit/mask_sampler.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "strkit/imageio.hpp"

namespace strkit {
namespace {

using nlohmann::json;

// uniform double in [0,1) from the top 53 bits; avoids std distributions,
// whose output is not pinned by the standard
double canonical(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(MaskSource s) {
  switch (s) {
    case MaskSource::Box: return "box";
    case MaskSource::CoarseStroke: return "coarse";
    case MaskSource::DetailedStroke: return "detailed";
  }
  return "unknown";
}

void validate_ratios(const MixRatios& ratios) {
  const double sum = ratios.p_box + ratios.p_coarse + ratios.p_detailed;
  if (ratios.p_box < 0 || ratios.p_coarse < 0 || ratios.p_detailed < 0 ||
      std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::RatioInvalid,
                "mix ratios must be non-negative and sum to 1");
}

MaskCorpus load_corpus(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::NotFound, manifest.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::DecodeError, "corpus manifest: " + std::string(e.what()));
  }

  std::filesystem::path root = manifest.parent_path();
  if (j.contains("root")) {
    std::filesystem::path r = j.at("root").get<std::string>();
    root = r.is_absolute() ? r : root / r;
  }
  auto read_list = [&](const char* key, std::vector<std::filesystem::path>& out) {
    if (!j.contains(key)) return;
    for (const auto& item : j.at(key)) {
      std::filesystem::path p = item.get<std::string>();
      out.push_back(p.is_absolute() ? p : root / p);
    }
  };
  MaskCorpus corpus;
  read_list("box", corpus.box_masks);
  read_list("coarse", corpus.coarse_masks);
  read_list("detailed", corpus.detailed_masks);
  return corpus;
}

MaskSampler::MaskSampler(const MaskCorpus& corpus, const MixRatios& ratios,
                         SamplerState state)
    : corpus_(corpus), ratios_(ratios), state_(state), engine_(state.rng_seed) {
  validate_ratios(ratios_);
  if (corpus_.empty())
    throw Error(ErrorCode::EmptyCorpus, "all corpus categories are empty");
  // two raw draws per sample; fast-forward to the recorded position
  engine_.discard(2 * state_.draw_count);
}

MaskSampler::Draw MaskSampler::next() {
  const double u_cat = canonical(engine_);
  const double u_idx = canonical(engine_);
  state_.draw_count++;

  struct Cat {
    MaskSource source;
    const std::vector<std::filesystem::path>* list;
    double p;
  };
  const Cat cats[3] = {
      {MaskSource::Box, &corpus_.box_masks, ratios_.p_box},
      {MaskSource::CoarseStroke, &corpus_.coarse_masks, ratios_.p_coarse},
      {MaskSource::DetailedStroke, &corpus_.detailed_masks, ratios_.p_detailed},
  };

  // empty categories get probability zero; remaining mass renormalized
  double total = 0;
  for (const Cat& c : cats)
    if (!c.list->empty()) total += c.p;
  if (total <= 0) {
    // ratios put all mass on empty categories; fall back to uniform over
    // the non-empty ones
    int alive = 0;
    for (const Cat& c : cats) alive += !c.list->empty();
    const double even = 1.0 / alive;
    double cum = 0;
    for (const Cat& c : cats) {
      if (c.list->empty()) continue;
      cum += even;
      if (u_cat < cum || &c == &cats[2]) {
        const std::size_t idx = std::min(
            static_cast<std::size_t>(u_idx * c.list->size()), c.list->size() - 1);
        return {c.source, (*c.list)[idx]};
      }
    }
  }

  const double scaled = u_cat * total;
  double cum = 0;
  const Cat* chosen = nullptr;
  for (const Cat& c : cats) {
    if (c.list->empty()) continue;
    cum += c.p;
    chosen = &c;
    if (scaled < cum) break;
  }
  const std::size_t idx = std::min(
      static_cast<std::size_t>(u_idx * chosen->list->size()), chosen->list->size() - 1);
  return {chosen->source, (*chosen->list)[idx]};
}

SampleResult sample_mask(const MaskCorpus& corpus, const MixRatios& ratios,
                         SamplerState state) {
  MaskSampler sampler(corpus, ratios, state);
  const MaskSampler::Draw draw = sampler.next();
  SampleResult result;
  result.mask = load_mask(draw.path);
  result.source = draw.source;
  result.path = draw.path;
  result.state = sampler.state();
  return result;
}

RgbImage compose_reference(const RgbImage& img, const BinaryMask& mask,
                           Polarity polarity) {
  if (img.width != mask.width || img.height != mask.height)
    throw Error(ErrorCode::DimensionMismatch, "mask size differs from image");
  RgbImage out = img;
  const bool zero_masked = polarity == Polarity::KeepBackground;
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    if ((mask.data[i] != 0) == zero_masked) {
      std::uint8_t* px = out.data.data() + i * 3;
      px[0] = px[1] = px[2] = 0;
    }
  }
  return out;
}

}  // namespace strkit
