#include "strkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "strkit/color.hpp"
#include "strkit/imageio.hpp"
#include "strkit/parallel.hpp"

namespace strkit {
namespace {

void check_pair(const RgbImage& pred, const RgbImage& gt) {
  if (!pred.same_size(gt))
    throw Error(ErrorCode::DimensionMismatch, "prediction size differs from ground truth");
}

// 8-bit mean squared error over all channels
double mse_raw(const RgbImage& pred, const RgbImage& gt) {
  double acc = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double d = static_cast<double>(pred.data[i]) - gt.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.data.size());
}

double psnr_from_mse(double mse, const MetricConfig& cfg) {
  if (mse <= 0.0) return cfg.psnr_cap;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double age_from_gray(const GrayImage& a, const GrayImage& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    acc += std::abs(static_cast<int>(a.data[i]) - static_cast<int>(b.data[i]));
  return acc / static_cast<double>(a.data.size());
}

std::vector<std::uint8_t> error_map(const GrayImage& a, const GrayImage& b, int thresh) {
  std::vector<std::uint8_t> e(a.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i)
    e[i] = std::abs(static_cast<int>(a.data[i]) - static_cast<int>(b.data[i])) > thresh;
  return e;
}

double peps_from_gray(const GrayImage& a, const GrayImage& b, int thresh) {
  const auto e = error_map(a, b, thresh);
  std::size_t count = 0;
  for (std::uint8_t v : e) count += v;
  return static_cast<double>(count) / static_cast<double>(e.size());
}

double pceps_from_gray(const GrayImage& a, const GrayImage& b, int thresh) {
  if (a.width < 3 || a.height < 3)
    throw Error(ErrorCode::ImageTooSmall, "pCEPs needs at least 3x3 images");
  const auto e = error_map(a, b, thresh);
  const int w = a.width, h = a.height;
  std::size_t count = 0;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (e[i] && e[i - 1] && e[i + 1] && e[i - w] && e[i + w]) count++;
    }
  }
  return static_cast<double>(count) / static_cast<double>(e.size());
}

std::vector<double> gaussian_kernel(int side, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(side) * side);
  const int r = side / 2;
  double sum = 0;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = x - r, dy = y - r;
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(y) * side + x] = v;
      sum += v;
    }
  }
  for (double& v : k) v /= sum;
  return k;
}

double mssim_from_gray(const GrayImage& a, const GrayImage& b, const MetricConfig& cfg) {
  const int side = cfg.ssim_window;
  if (a.width < side || a.height < side)
    throw Error(ErrorCode::ImageTooSmall, "MSSIM needs images at least the window size");

  static thread_local std::vector<double> kernel;
  static thread_local int kernel_side = 0;
  static thread_local double kernel_sigma = 0;
  if (kernel_side != side || kernel_sigma != cfg.ssim_sigma) {
    kernel = gaussian_kernel(side, cfg.ssim_sigma);
    kernel_side = side;
    kernel_sigma = cfg.ssim_sigma;
  }

  constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  const int w = a.width, h = a.height;
  double total = 0;
  std::size_t windows = 0;
  for (int y = 0; y + side <= h; ++y) {
    for (int x = 0; x + side <= w; ++x) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      const double* kp = kernel.data();
      for (int ky = 0; ky < side; ++ky) {
        const std::uint8_t* pa = a.data.data() + static_cast<std::size_t>(y + ky) * w + x;
        const std::uint8_t* pb = b.data.data() + static_cast<std::size_t>(y + ky) * w + x;
        for (int kx = 0; kx < side; ++kx, ++kp) {
          const double wgt = *kp;
          const double va = pa[kx], vb = pb[kx];
          mx += wgt * va;
          my += wgt * vb;
          sxx += wgt * va * va;
          syy += wgt * vb * vb;
          sxy += wgt * va * vb;
        }
      }
      const double var_x = sxx - mx * mx;
      const double var_y = syy - my * my;
      const double cov = sxy - mx * my;
      const double ssim = ((2 * mx * my + c1) * (2 * cov + c2)) /
                          ((mx * mx + my * my + c1) * (var_x + var_y + c2));
      total += ssim;
      windows++;
    }
  }
  return 100.0 * total / static_cast<double>(windows);
}

}  // namespace

double psnr(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg) {
  check_pair(pred, gt);
  return psnr_from_mse(mse_raw(pred, gt), cfg);
}

double mse_percent(const RgbImage& pred, const RgbImage& gt) {
  check_pair(pred, gt);
  return mse_raw(pred, gt) / (255.0 * 255.0) * 100.0;
}

double mssim(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg) {
  check_pair(pred, gt);
  return mssim_from_gray(rgb_to_gray(pred), rgb_to_gray(gt), cfg);
}

double age(const RgbImage& pred, const RgbImage& gt) {
  check_pair(pred, gt);
  return age_from_gray(rgb_to_gray(pred), rgb_to_gray(gt));
}

double peps(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg) {
  check_pair(pred, gt);
  return peps_from_gray(rgb_to_gray(pred), rgb_to_gray(gt), cfg.ep_threshold);
}

double pceps(const RgbImage& pred, const RgbImage& gt, const MetricConfig& cfg) {
  check_pair(pred, gt);
  return pceps_from_gray(rgb_to_gray(pred), rgb_to_gray(gt), cfg.ep_threshold);
}

MetricValues evaluate_pair(const RgbImage& pred, const RgbImage& gt,
                           const MetricConfig& cfg) {
  check_pair(pred, gt);
  const GrayImage ga = rgb_to_gray(pred);
  const GrayImage gb = rgb_to_gray(gt);
  MetricValues v;
  const double mse = mse_raw(pred, gt);
  v.psnr = psnr_from_mse(mse, cfg);
  v.mse = mse / (255.0 * 255.0) * 100.0;
  v.mssim = mssim_from_gray(ga, gb, cfg);
  v.age = age_from_gray(ga, gb);
  v.peps = peps_from_gray(ga, gb, cfg.ep_threshold);
  v.pceps = pceps_from_gray(ga, gb, cfg.ep_threshold);
  return v;
}

MetricsReport evaluate_dataset(const std::vector<EvalPair>& pairs,
                               const MetricConfig& cfg, int threads) {
  if (pairs.empty())
    throw Error(ErrorCode::EmptyDataset, "no pairs to evaluate");

  MetricsReport report;
  report.per_pair.resize(pairs.size());
  parallel_for_index(pairs.size(), threads, [&](std::size_t i) {
    PairRecord& rec = report.per_pair[i];
    rec.id = pairs[i].id;
    try {
      const RgbImage pred = load_rgb(pairs[i].pred);
      const RgbImage gt = load_rgb(pairs[i].gt);
      rec.values = evaluate_pair(pred, gt, cfg);
      rec.ok = true;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  MetricValues sum;
  for (const PairRecord& rec : report.per_pair) {
    if (!rec.ok) {
      report.failure_count++;
      continue;
    }
    report.pair_count++;
    sum.psnr += rec.values.psnr;
    sum.mssim += rec.values.mssim;
    sum.mse += rec.values.mse;
    sum.age += rec.values.age;
    sum.peps += rec.values.peps;
    sum.pceps += rec.values.pceps;
  }
  if (report.pair_count > 0) {
    const double n = static_cast<double>(report.pair_count);
    report.aggregate = {sum.psnr / n, sum.mssim / n, sum.mse / n,
                        sum.age / n,  sum.peps / n,  sum.pceps / n};
  }
  return report;
}

namespace {

std::string format_values(const MetricValues& v) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", v.psnr,
                v.mssim, v.mse, v.age, v.peps, v.pceps);
  return buf;
}

}  // namespace

void write_report_csv(const MetricsReport& report, std::ostream& out) {
  out << "id,psnr,mssim,mse,age,peps,pceps,status\n";
  for (const PairRecord& rec : report.per_pair) {
    if (rec.ok) {
      out << rec.id << ',' << format_values(rec.values) << ",ok\n";
    } else {
      std::string msg = rec.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out << rec.id << ",,,,,,," << msg << "\n";
    }
  }
  out << "aggregate," << format_values(report.aggregate) << ",pairs="
      << report.pair_count << " failed=" << report.failure_count << "\n";
}

std::string format_report_table(const MetricsReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-24s %9s %9s %9s %9s %9s %9s\n", "pair",
                "PSNR", "MSSIM", "MSE", "AGE", "pEPs", "pCEPs");
  out << buf;
  auto row = [&](const std::string& id, const MetricValues& v) {
    std::snprintf(buf, sizeof(buf), "%-24s %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f\n",
                  id.c_str(), v.psnr, v.mssim, v.mse, v.age, v.peps, v.pceps);
    out << buf;
  };
  for (const PairRecord& rec : report.per_pair) {
    if (rec.ok) {
      row(rec.id, rec.values);
    } else {
      std::snprintf(buf, sizeof(buf), "%-24s %s\n", rec.id.c_str(), "FAILED");
      out << buf;
    }
  }
  row("aggregate", report.aggregate);
  return out.str();
}

}  // namespace strkit
