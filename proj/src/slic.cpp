#include "strkit/slic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace strkit {
namespace {

struct Center {
  double l = 0, a = 0, b = 0, x = 0, y = 0;
};

double gradient_at(const LabImage& img, int x, int y) {
  const int xl = std::max(0, x - 1), xr = std::min(img.width - 1, x + 1);
  const int yu = std::max(0, y - 1), yd = std::min(img.height - 1, y + 1);
  const float* pl = img.pixel(xl, y);
  const float* pr = img.pixel(xr, y);
  const float* pu = img.pixel(x, yu);
  const float* pd = img.pixel(x, yd);
  double g = 0;
  for (int c = 0; c < 3; ++c) {
    const double dx = static_cast<double>(pr[c]) - pl[c];
    const double dy = static_cast<double>(pd[c]) - pu[c];
    g += dx * dx + dy * dy;
  }
  return g;
}

std::vector<Center> init_centers(const LabImage& img, int k) {
  // aspect-aware grid: nx*ny ~= k and spacing ~= S on both axes; biased
  // toward columns so small k still splits the wider axis
  const double aspect = static_cast<double>(img.width) / img.height;
  const int nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(k * aspect))));
  const int ny = std::max(1, static_cast<int>(std::lround(static_cast<double>(k) / nx)));
  const double step_x = static_cast<double>(img.width) / nx;
  const double step_y = static_cast<double>(img.height) / ny;

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int cx = std::min(img.width - 1, static_cast<int>((i + 0.5) * step_x));
      int cy = std::min(img.height - 1, static_cast<int>((j + 0.5) * step_y));
      // move to the lowest-gradient spot in the 3x3 neighborhood; ties keep
      // the earlier position so uniform images stay on the exact grid
      int bx = cx, by = cy;
      double bg = gradient_at(img, cx, cy);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int px = cx + dx, py = cy + dy;
          if (px < 0 || px >= img.width || py < 0 || py >= img.height) continue;
          const double g = gradient_at(img, px, py);
          if (g < bg) {
            bg = g;
            bx = px;
            by = py;
          }
        }
      }
      Center c;
      const float* p = img.pixel(bx, by);
      c.l = p[0];
      c.a = p[1];
      c.b = p[2];
      c.x = bx;
      c.y = by;
      centers.push_back(c);
    }
  }
  return centers;
}

}  // namespace

LabelMap slic(const LabImage& img, const SlicParams& params, SlicDiagnostics* diag) {
  const std::int64_t n = static_cast<std::int64_t>(img.pixel_count());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty image");
  if (params.k < 1 || params.k > n)
    throw Error(ErrorCode::InvalidK, "k must be in [1, pixel count]");

  const int w = img.width, h = img.height;
  const double s = std::sqrt(static_cast<double>(n) / params.k);
  const double spatial_scale =
      (params.compactness_m * params.compactness_m) / (s * s);
  const int reach = static_cast<int>(std::ceil(s));

  std::vector<Center> centers = init_centers(img, params.k);
  const int center_count = static_cast<int>(centers.size());

  std::vector<std::int32_t> labels(n, -1);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  if (diag) {
    diag->objective.clear();
    diag->iterations_run = 0;
  }

  auto dist_to = [&](std::size_t i, const Center& c) {
    const int px = static_cast<int>(i % w);
    const int py = static_cast<int>(i / w);
    const float* p = img.data.data() + i * 3;
    const double dl = p[0] - c.l;
    const double da = p[1] - c.a;
    const double db = p[2] - c.b;
    const double dx = px - c.x;
    const double dy = py - c.y;
    return dl * dl + da * da + db * db + spatial_scale * (dx * dx + dy * dy);
  };

  for (int iter = 0; iter < params.max_iters; ++iter) {
    // seed distances from the current assignment so a pixel can only keep or
    // improve its label; this makes the objective non-increasing even though
    // the search below is windowed
    if (iter > 0) {
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        dist[i] = dist_to(i, centers[labels[i]]);
    }

    for (int c = 0; c < center_count; ++c) {
      const Center& ct = centers[c];
      const int x0 = std::max(0, static_cast<int>(std::floor(ct.x)) - reach);
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(ct.x)) + reach);
      const int y0 = std::max(0, static_cast<int>(std::floor(ct.y)) - reach);
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(ct.y)) + reach);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          const double d = dist_to(i, ct);
          if (d < dist[i] || (d == dist[i] && c < labels[i])) {
            dist[i] = d;
            labels[i] = c;
          }
        }
      }
    }

    // window coverage can miss pixels on extreme aspect ratios; sweep them up
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      if (labels[i] >= 0) continue;
      for (int c = 0; c < center_count; ++c) {
        const double d = dist_to(i, centers[c]);
        if (d < dist[i]) {
          dist[i] = d;
          labels[i] = c;
        }
      }
    }

    if (diag) {
      double obj = 0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) obj += dist[i];
      diag->objective.push_back(obj);
      diag->iterations_run = iter + 1;
    }

    // recenter on cluster means
    std::vector<std::array<double, 6>> acc(center_count, {0, 0, 0, 0, 0, 0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      const float* p = img.data.data() + i * 3;
      auto& a = acc[labels[i]];
      a[0] += p[0];
      a[1] += p[1];
      a[2] += p[2];
      a[3] += static_cast<double>(i % w);
      a[4] += static_cast<double>(i / w);
      a[5] += 1.0;
    }
    double movement = 0;
    for (int c = 0; c < center_count; ++c) {
      const auto& a = acc[c];
      if (a[5] == 0) continue;  // orphaned center keeps its position
      Center nc{a[0] / a[5], a[1] / a[5], a[2] / a[5], a[3] / a[5], a[4] / a[5]};
      const double dx = nc.x - centers[c].x;
      const double dy = nc.y - centers[c].y;
      movement += std::sqrt(dx * dx + dy * dy);
      centers[c] = nc;
    }
    if (movement / center_count < 0.5) break;
  }

  LabelMap raw;
  raw.width = w;
  raw.height = h;
  raw.labels = std::move(labels);
  raw.n_segments = center_count;
  return enforce_connectivity(raw, img, params.min_region_frac);
}

LabelMap enforce_connectivity(const LabelMap& lm, const LabImage& img,
                              double min_region_frac) {
  if (lm.width != img.width || lm.height != img.height)
    throw Error(ErrorCode::DimensionMismatch, "label map size differs from image");

  const int w = lm.width, h = lm.height;
  const std::size_t n = lm.pixel_count();

  // 4-connected components of the label field, ids in scan order
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::int64_t> comp_size;
  std::vector<std::array<double, 3>> comp_lab_sum;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(comp_size.size());
    const std::int32_t label = lm.labels[start];
    comp_size.push_back(0);
    comp_lab_sum.push_back({0, 0, 0});
    stack.clear();
    stack.push_back(start);
    comp[start] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comp_size[id]++;
      const float* p = img.data.data() + i * 3;
      comp_lab_sum[id][0] += p[0];
      comp_lab_sum[id][1] += p[1];
      comp_lab_sum[id][2] += p[2];
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const std::size_t neighbors[4] = {i - 1, i + 1, i - w, i + w};
      const bool valid[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int d = 0; d < 4; ++d) {
        if (!valid[d]) continue;
        const std::size_t j = neighbors[d];
        if (comp[j] < 0 && lm.labels[j] == label) {
          comp[j] = id;
          stack.push_back(j);
        }
      }
    }
  }
  const std::int32_t comp_count = static_cast<std::int32_t>(comp_size.size());

  // component adjacency
  std::vector<std::set<std::int32_t>> neighbors(comp_count);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w && comp[i] != comp[i + 1]) {
        neighbors[comp[i]].insert(comp[i + 1]);
        neighbors[comp[i + 1]].insert(comp[i]);
      }
      if (y + 1 < h && comp[i] != comp[i + w]) {
        neighbors[comp[i]].insert(comp[i + w]);
        neighbors[comp[i + w]].insert(comp[i]);
      }
    }
  }

  // absorb fragments below the size floor into the nearest-color neighbor
  const double s_sq =
      static_cast<double>(n) / std::max<std::int32_t>(1, lm.n_segments);
  const double size_floor = min_region_frac * s_sq;

  std::vector<std::int32_t> parent(comp_count);
  for (std::int32_t i = 0; i < comp_count; ++i) parent[i] = i;
  auto find = [&](std::int32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };

  for (std::int32_t c = 0; c < comp_count; ++c) {
    if (find(c) != c) continue;  // already absorbed elsewhere
    if (static_cast<double>(comp_size[c]) >= size_floor) continue;

    // current neighbor roots, deterministic order
    std::set<std::int32_t> roots;
    for (std::int32_t nb : neighbors[c]) {
      const std::int32_t r = find(nb);
      if (r != c) roots.insert(r);
    }
    if (roots.empty()) continue;  // isolated small region, nothing to join

    const double cl = comp_lab_sum[c][0] / comp_size[c];
    const double ca = comp_lab_sum[c][1] / comp_size[c];
    const double cb = comp_lab_sum[c][2] / comp_size[c];
    std::int32_t best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int32_t r : roots) {
      const double rl = comp_lab_sum[r][0] / comp_size[r];
      const double ra = comp_lab_sum[r][1] / comp_size[r];
      const double rb = comp_lab_sum[r][2] / comp_size[r];
      const double d = (cl - rl) * (cl - rl) + (ca - ra) * (ca - ra) +
                       (cb - rb) * (cb - rb);
      if (d < best_d) {
        best_d = d;
        best = r;
      }
    }

    parent[c] = best;
    comp_size[best] += comp_size[c];
    for (int ch = 0; ch < 3; ++ch) comp_lab_sum[best][ch] += comp_lab_sum[c][ch];
    // the survivor inherits the absorbed component's adjacency
    for (std::int32_t nb : neighbors[c]) {
      const std::int32_t r = find(nb);
      if (r != best) neighbors[best].insert(nb);
    }
  }

  // dense renumbering in scan order
  LabelMap out;
  out.width = w;
  out.height = h;
  out.labels.assign(n, -1);
  std::vector<std::int32_t> remap(comp_count, -1);
  std::int32_t next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t r = find(comp[i]);
    if (remap[r] < 0) remap[r] = next_id++;
    out.labels[i] = remap[r];
  }
  out.n_segments = next_id;
  return out;
}

}  // namespace strkit
