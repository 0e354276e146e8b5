#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "strkit/image.hpp"

namespace strkit {

struct MetricConfig {
  int ep_threshold = 20;     // gray levels; error pixel iff |diff| > threshold
  int ssim_window = 11;      // Gaussian window side
  double ssim_sigma = 1.5;
  double psnr_cap = 100.0;   // reported for identical pairs (MSE == 0)
};

struct MetricValues {
  double psnr = 0.0;    // dB
  double mssim = 0.0;   // percent [0,100]
  double mse = 0.0;     // percent of the normalized [0,1]^2 scale
  double age = 0.0;     // mean absolute gray difference [0,255]
  double peps = 0.0;    // fraction [0,1]
  double pceps = 0.0;   // fraction [0,1]
};

double psnr(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg = {});
double mse_percent(const RgbImage& pred, const RgbImage& gt);
double mssim(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg = {});
double age(const RgbImage& pred, const RgbImage& gt);
double peps(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg = {});
double pceps(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg = {});

/// All six metrics in one pass; grayscale buffers are shared between AGE,
/// pEPs, pCEPs and MSSIM.
MetricValues evaluate_pair(const RgbImage& pred, const RgbImage& gt,
                           const MetricConfig& cfg = {});

struct EvalPair {
  std::string id;
  std::filesystem::path pred;
  std::filesystem::path gt;
};

struct PairRecord {
  std::string id;
  bool ok = false;
  MetricValues values;   // valid iff ok
  std::string error;     // empty iff ok
};

struct MetricsReport {
  std::vector<PairRecord> per_pair;     // input order
  MetricValues aggregate;               // arithmetic mean over ok rows
  std::size_t pair_count = 0;           // rows evaluated successfully
  std::size_t failure_count = 0;
};

/// Evaluate a list of prediction/ground-truth files. Per-pair failures
/// (missing file, decode error, size mismatch) are recorded and the run
/// continues. Deterministic output order regardless of thread count.
MetricsReport evaluate_dataset(const std::vector<EvalPair>& pairs,
                               const MetricConfig& cfg = {}, int threads = 1);

/// CSV: header, one row per pair (failed rows carry the error in place of
/// values), aggregate footer row.
void write_report_csv(const MetricsReport& report, std::ostream& out);

/// Aligned plain-text table in Table-1 column order:
/// PSNR, MSSIM, MSE, AGE, pEPs, pCEPs.
std::string format_report_table(const MetricsReport& report);

}  // namespace strkit
