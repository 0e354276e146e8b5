#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace oracle {

using strkit::BinaryMask;
using strkit::ElementShape;
using strkit::LabelMap;
using strkit::LabImage;
using strkit::RgbImage;

std::uint8_t gray_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  const long v = std::lround(y);
  return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

std::vector<std::uint8_t> gray_image(const RgbImage& img) {
  std::vector<std::uint8_t> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = gray_of(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
  return out;
}

std::array<double, 3> srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  auto lin = [](double c) {
    c /= 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(r8), g = lin(g8), b = lin(b8);
  const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
  auto f = [](double t) {
    return t > 216.0 / 24389.0 ? std::cbrt(t) : (24389.0 / 27.0 * t + 16.0) / 116.0;
  };
  const double fx = f(x), fy = f(y), fz = f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<int, 3> lab_to_srgb(double l, double a, double b) {
  const double fy = (l + 16.0) / 116.0;
  const double fx = fy + a / 500.0;
  const double fz = fy - b / 200.0;
  auto finv = [](double t) {
    const double t3 = t * t * t;
    return t3 > 216.0 / 24389.0 ? t3 : (116.0 * t - 16.0) / (24389.0 / 27.0);
  };
  const double x = finv(fx) * 0.95047;
  const double y = finv(fy);
  const double z = finv(fz) * 1.08883;
  const double rl = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double gl = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double bl = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  auto delin = [](double c) {
    c = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
    return static_cast<int>(std::lround(c * 255.0));
  };
  return {delin(rl), delin(gl), delin(bl)};
}

double psnr(const RgbImage& a, const RgbImage& b, double cap) {
  double sq = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    sq += d * d;
  }
  if (sq == 0) return cap;
  const double mse = sq / static_cast<double>(a.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double mse_percent(const RgbImage& a, const RgbImage& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = (static_cast<double>(a.data[i]) - b.data[i]) / 255.0;
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size()) * 100.0;
}

double mssim(const RgbImage& pa, const RgbImage& pb) {
  const auto a = gray_image(pa);
  const auto b = gray_image(pb);
  const int w = pa.width, h = pa.height;
  constexpr int side = 11;
  constexpr double sigma = 1.5;
  constexpr double c1 = 2.55 * 2.55;
  constexpr double c2 = 7.65 * 7.65;

  double kernel[side][side];
  double ksum = 0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const double dx = x - side / 2, dy = y - side / 2;
      kernel[y][x] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
      ksum += kernel[y][x];
    }
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) kernel[y][x] /= ksum;

  double total = 0;
  long windows = 0;
  for (int wy = 0; wy + side <= h; ++wy) {
    for (int wx = 0; wx + side <= w; ++wx) {
      // two-pass: weighted means first, then central moments
      double mx = 0, my = 0;
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
          mx += kernel[y][x] * a[static_cast<std::size_t>(wy + y) * w + wx + x];
          my += kernel[y][x] * b[static_cast<std::size_t>(wy + y) * w + wx + x];
        }
      double vx = 0, vy = 0, cov = 0;
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
          const double da = a[static_cast<std::size_t>(wy + y) * w + wx + x] - mx;
          const double db = b[static_cast<std::size_t>(wy + y) * w + wx + x] - my;
          vx += kernel[y][x] * da * da;
          vy += kernel[y][x] * db * db;
          cov += kernel[y][x] * da * db;
        }
      total += ((2 * mx * my + c1) * (2 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      windows++;
    }
  }
  return 100.0 * total / windows;
}

double age(const RgbImage& pa, const RgbImage& pb) {
  const auto a = gray_image(pa);
  const auto b = gray_image(pb);
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i]));
  return acc / static_cast<double>(a.size());
}

double peps(const RgbImage& pa, const RgbImage& pb, int thresh) {
  const auto a = gray_image(pa);
  const auto b = gray_image(pb);
  long count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])) > thresh) count++;
  return static_cast<double>(count) / static_cast<double>(a.size());
}

double pceps(const RgbImage& pa, const RgbImage& pb, int thresh) {
  const auto a = gray_image(pa);
  const auto b = gray_image(pb);
  const int w = pa.width, h = pa.height;
  auto is_err = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    return std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])) > thresh;
  };
  long count = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) continue;
      if (is_err(x, y) && is_err(x - 1, y) && is_err(x + 1, y) && is_err(x, y - 1) &&
          is_err(x, y + 1))
        count++;
    }
  return static_cast<double>(count) / (static_cast<double>(w) * h);
}

namespace {

bool in_element(ElementShape shape, int dx, int dy, int r) {
  if (shape == ElementShape::Square) return std::abs(dx) <= r && std::abs(dy) <= r;
  return (dx == 0 && std::abs(dy) <= r) || (dy == 0 && std::abs(dx) <= r);
}

}  // namespace

BinaryMask erode(const BinaryMask& m, ElementShape shape, int radius) {
  BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      bool all = true;
      for (int dy = -radius; dy <= radius && all; ++dy)
        for (int dx = -radius; dx <= radius && all; ++dx) {
          if (!in_element(shape, dx, dy, radius)) continue;
          const int nx = x + dx, ny = y + dy;
          const bool v =
              nx >= 0 && nx < m.width && ny >= 0 && ny < m.height && m.at(nx, ny);
          if (!v) all = false;
        }
      out.set(x, y, all);
    }
  return out;
}

BinaryMask dilate(const BinaryMask& m, ElementShape shape, int radius) {
  BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      bool any = false;
      for (int dy = -radius; dy <= radius && !any; ++dy)
        for (int dx = -radius; dx <= radius && !any; ++dx) {
          if (!in_element(shape, dx, dy, radius)) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && nx < m.width && ny >= 0 && ny < m.height && m.at(nx, ny))
            any = true;
        }
      out.set(x, y, any);
    }
  return out;
}

BinaryMask resample(const BinaryMask& m, int tw, int th, double thresh) {
  BinaryMask out(tw, th);
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      const double fx = (x + 0.5) * m.width / tw - 0.5;
      const double fy = (y + 0.5) * m.height / th - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      int y0 = static_cast<int>(std::floor(fy));
      double wx = fx - x0, wy = fy - y0;
      if (x0 < 0) { x0 = 0; wx = 0; }
      if (y0 < 0) { y0 = 0; wy = 0; }
      if (x0 >= m.width - 1) { x0 = m.width - 1; wx = 0; }
      if (y0 >= m.height - 1) { y0 = m.height - 1; wy = 0; }
      const int x1 = std::min(x0 + 1, m.width - 1);
      const int y1 = std::min(y0 + 1, m.height - 1);
      const double v = (1 - wy) * ((1 - wx) * m.at(x0, y0) + wx * m.at(x1, y0)) +
                       wy * ((1 - wx) * m.at(x0, y1) + wx * m.at(x1, y1));
      out.set(x, y, v >= thresh);
    }
  return out;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  long inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    inter += a.data[i] && b.data[i];
    uni += a.data[i] || b.data[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

int component_count(const LabelMap& lm) {
  const int w = lm.width, h = lm.height;
  std::vector<char> seen(lm.pixel_count(), 0);
  std::vector<std::size_t> stack;
  int count = 0;
  for (std::size_t start = 0; start < lm.pixel_count(); ++start) {
    if (seen[start]) continue;
    count++;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      const std::size_t nb[4] = {i - 1, i + 1, i - w, i + w};
      const bool ok[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int d = 0; d < 4; ++d)
        if (ok[d] && !seen[nb[d]] && lm.labels[nb[d]] == lm.labels[i]) {
          seen[nb[d]] = 1;
          stack.push_back(nb[d]);
        }
    }
  }
  return count;
}

bool labels_connected(const LabelMap& lm) {
  return component_count(lm) == lm.n_segments;
}

std::vector<std::pair<std::int32_t, std::int32_t>> adjacency(const LabelMap& lm) {
  std::set<std::pair<std::int32_t, std::int32_t>> pairs;
  for (int y = 0; y < lm.height; ++y)
    for (int x = 0; x < lm.width; ++x) {
      const std::int32_t v = lm.at(x, y);
      if (x + 1 < lm.width && lm.at(x + 1, y) != v)
        pairs.insert({std::min(v, lm.at(x + 1, y)), std::max(v, lm.at(x + 1, y))});
      if (y + 1 < lm.height && lm.at(x, y + 1) != v)
        pairs.insert({std::min(v, lm.at(x, y + 1)), std::max(v, lm.at(x, y + 1))});
    }
  return {pairs.begin(), pairs.end()};
}

std::int64_t boundary_length(const LabelMap& lm, std::int32_t a, std::int32_t b) {
  std::int64_t len = 0;
  for (int y = 0; y < lm.height; ++y)
    for (int x = 0; x < lm.width; ++x) {
      const std::int32_t v = lm.at(x, y);
      if (x + 1 < lm.width) {
        const std::int32_t u = lm.at(x + 1, y);
        if ((v == a && u == b) || (v == b && u == a)) len++;
      }
      if (y + 1 < lm.height) {
        const std::int32_t u = lm.at(x, y + 1);
        if ((v == a && u == b) || (v == b && u == a)) len++;
      }
    }
  return len;
}

LabelMap canonicalize(const LabelMap& lm) {
  LabelMap out;
  out.width = lm.width;
  out.height = lm.height;
  out.labels.assign(lm.labels.size(), -1);
  std::map<std::int32_t, std::int32_t> remap;
  std::int32_t next = 0;
  for (std::size_t i = 0; i < lm.labels.size(); ++i) {
    auto [it, fresh] = remap.emplace(lm.labels[i], next);
    if (fresh) next++;
    out.labels[i] = it->second;
  }
  out.n_segments = next;
  return out;
}

LabelMap slic_global(const LabImage& img, int k, double m, int max_iters) {
  const int w = img.width, h = img.height;
  const double n = static_cast<double>(img.pixel_count());
  const double s = std::sqrt(n / k);
  const double inv = (m * m) / (s * s);

  // same seeding scheme as the implementation, written out again
  const double aspect = static_cast<double>(w) / h;
  const int nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(k * aspect))));
  const int ny = std::max(1, static_cast<int>(std::lround(static_cast<double>(k) / nx)));
  struct C {
    double l, a, b, x, y;
  };
  std::vector<C> centers;
  auto grad = [&](int x, int y) {
    const int xl = std::max(0, x - 1), xr = std::min(w - 1, x + 1);
    const int yu = std::max(0, y - 1), yd = std::min(h - 1, y + 1);
    double g = 0;
    for (int c = 0; c < 3; ++c) {
      const double dx = static_cast<double>(img.pixel(xr, y)[c]) - img.pixel(xl, y)[c];
      const double dy = static_cast<double>(img.pixel(x, yd)[c]) - img.pixel(x, yu)[c];
      g += dx * dx + dy * dy;
    }
    return g;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int cx = std::min(w - 1, static_cast<int>((i + 0.5) * w / nx));
      int cy = std::min(h - 1, static_cast<int>((j + 0.5) * h / ny));
      int bx = cx, by = cy;
      double bg = grad(cx, cy);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int px = cx + dx, py = cy + dy;
          if (px < 0 || px >= w || py < 0 || py >= h) continue;
          if (grad(px, py) < bg) {
            bg = grad(px, py);
            bx = px;
            by = py;
          }
        }
      const float* p = img.pixel(bx, by);
      centers.push_back({p[0], p[1], p[2], static_cast<double>(bx), static_cast<double>(by)});
    }

  std::vector<std::int32_t> labels(img.pixel_count(), -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      const int px = static_cast<int>(i % w), py = static_cast<int>(i / w);
      const float* p = img.data.data() + i * 3;
      double best = std::numeric_limits<double>::infinity();
      std::int32_t best_c = -1;
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dl = p[0] - centers[c].l;
        const double da = p[1] - centers[c].a;
        const double db = p[2] - centers[c].b;
        const double dx = px - centers[c].x;
        const double dy = py - centers[c].y;
        const double d = dl * dl + da * da + db * db + inv * (dx * dx + dy * dy);
        if (d < best) {
          best = d;
          best_c = static_cast<std::int32_t>(c);
        }
      }
      labels[i] = best_c;
    }
    std::vector<std::array<double, 6>> acc(centers.size(), {0, 0, 0, 0, 0, 0});
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      const float* p = img.data.data() + i * 3;
      auto& a = acc[labels[i]];
      a[0] += p[0];
      a[1] += p[1];
      a[2] += p[2];
      a[3] += static_cast<double>(i % w);
      a[4] += static_cast<double>(i / w);
      a[5] += 1;
    }
    double movement = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (acc[c][5] == 0) continue;
      C nc{acc[c][0] / acc[c][5], acc[c][1] / acc[c][5], acc[c][2] / acc[c][5],
           acc[c][3] / acc[c][5], acc[c][4] / acc[c][5]};
      const double dx = nc.x - centers[c].x, dy = nc.y - centers[c].y;
      movement += std::sqrt(dx * dx + dy * dy);
      centers[c] = nc;
    }
    if (movement / centers.size() < 0.5) break;
  }

  LabelMap out;
  out.width = w;
  out.height = h;
  out.labels = std::move(labels);
  out.n_segments = static_cast<std::int32_t>(centers.size());
  return out;
}

}  // namespace oracle
