#include "strkit/region_merge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "strkit/color.hpp"

namespace strkit {
namespace {

int lab_bin(const float* lab) {
  auto axis = [](double v, double lo, double hi) {
    int b = static_cast<int>((v - lo) / (hi - lo) * kHistBinsPerAxis);
    return std::clamp(b, 0, kHistBinsPerAxis - 1);
  };
  const int bl = axis(lab[0], 0.0, 100.0);
  const int ba = axis(lab[1], -128.0, 128.0);
  const int bb = axis(lab[2], -128.0, 128.0);
  return (bl * kHistBinsPerAxis + ba) * kHistBinsPerAxis + bb;
}

double mean_color_dist(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  const double dl = p[0] - q[0], da = p[1] - q[1], db = p[2] - q[2];
  return std::sqrt(dl * dl + da * da + db * db);
}

// live agglomeration state over the region graph
struct MergeState {
  std::vector<std::int32_t> parent;
  std::vector<std::uint32_t> version;
  std::vector<std::int64_t> pixels;
  std::vector<std::array<double, 3>> lab_sum;
  std::vector<std::vector<double>> hist;            // normalized
  std::vector<std::map<std::int32_t, std::int64_t>> adj;  // root -> boundary len
  std::vector<std::int64_t> perimeter;              // sum of adj boundary lens
  std::size_t merges = 0;

  explicit MergeState(const RegionGraph& g) {
    const std::size_t n = g.regions.size();
    parent.resize(n);
    version.assign(n, 0);
    pixels.resize(n);
    lab_sum.resize(n);
    hist.resize(n);
    adj.resize(n);
    perimeter.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const Region& r = g.regions[i];
      parent[i] = static_cast<std::int32_t>(i);
      pixels[i] = r.pixel_count;
      for (int c = 0; c < 3; ++c) lab_sum[i][c] = r.mean_lab[c] * r.pixel_count;
      hist[i].assign(r.histogram.begin(), r.histogram.end());
    }
    for (const RegionEdge& e : g.edges) {
      adj[e.a][e.b] = e.shared_boundary_len;
      adj[e.b][e.a] = e.shared_boundary_len;
      perimeter[e.a] += e.shared_boundary_len;
      perimeter[e.b] += e.shared_boundary_len;
    }
  }

  std::int32_t find(std::int32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  std::array<double, 3> mean(std::int32_t r) const {
    return {lab_sum[r][0] / pixels[r], lab_sum[r][1] / pixels[r],
            lab_sum[r][2] / pixels[r]};
  }

  double color_dist(std::int32_t a, std::int32_t b) const {
    return mean_color_dist(mean(a), mean(b));
  }

  double hist_dist(std::int32_t a, std::int32_t b) const {
    double acc = 0;
    for (int i = 0; i < kHistBins; ++i) {
      const double p = hist[a][i], q = hist[b][i];
      const double s = p + q;
      if (s > 0) acc += (p - q) * (p - q) / s;
    }
    return 0.5 * acc;
  }

  // merge b into a (a survives; caller passes a < b for determinism)
  void merge(std::int32_t a, std::int32_t b) {
    const std::int64_t bl = adj[a].at(b);
    perimeter[a] = perimeter[a] + perimeter[b] - 2 * bl;
    const double total = static_cast<double>(pixels[a] + pixels[b]);
    for (int i = 0; i < kHistBins; ++i)
      hist[a][i] = (hist[a][i] * pixels[a] + hist[b][i] * pixels[b]) / total;
    pixels[a] += pixels[b];
    for (int c = 0; c < 3; ++c) lab_sum[a][c] += lab_sum[b][c];

    adj[a].erase(b);
    adj[b].erase(a);
    for (const auto& [n, len] : adj[b]) {
      adj[a][n] += len;
      adj[n].erase(b);
      adj[n][a] += len;
    }
    adj[b].clear();
    parent[b] = a;
    version[a]++;
    version[b]++;
    merges++;
  }
};

struct QueueEntry {
  double key;
  std::int32_t a, b;                // a < b
  std::uint32_t va, vb;
};

struct EntryOrder {
  bool operator()(const QueueEntry& x, const QueueEntry& y) const {
    if (x.key != y.key) return x.key > y.key;  // min-heap
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

template <typename KeyFn>
void agglomerate(MergeState& st, double thresh, KeyFn key_of) {
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryOrder> pq;
  for (std::size_t a = 0; a < st.adj.size(); ++a) {
    if (st.find(static_cast<std::int32_t>(a)) != static_cast<std::int32_t>(a))
      continue;
    for (const auto& [b, len] : st.adj[a]) {
      if (b <= static_cast<std::int32_t>(a)) continue;
      pq.push({key_of(static_cast<std::int32_t>(a), b),
               static_cast<std::int32_t>(a), b, st.version[a], st.version[b]});
    }
  }
  while (!pq.empty()) {
    const QueueEntry e = pq.top();
    pq.pop();
    if (st.parent[e.a] != e.a || st.parent[e.b] != e.b) continue;
    if (st.version[e.a] != e.va || st.version[e.b] != e.vb) continue;
    if (!(e.key < thresh)) break;  // heap top is the global minimum
    st.merge(e.a, e.b);
    for (const auto& [n, len] : st.adj[e.a]) {
      const std::int32_t lo = std::min(e.a, n), hi = std::max(e.a, n);
      pq.push({key_of(lo, hi), lo, hi, st.version[lo], st.version[hi]});
    }
  }
}

}  // namespace

double chi_squared_distance(const std::vector<float>& p, const std::vector<float>& q) {
  if (p.size() != q.size())
    throw Error(ErrorCode::DimensionMismatch, "histogram sizes differ");
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = static_cast<double>(p[i]) + q[i];
    if (s > 0) {
      const double d = static_cast<double>(p[i]) - q[i];
      acc += d * d / s;
    }
  }
  return 0.5 * acc;
}

RegionGraph build_region_graph(const LabelMap& lm, const LabImage& img) {
  if (lm.width != img.width || lm.height != img.height)
    throw Error(ErrorCode::DimensionMismatch, "label map size differs from image");

  const std::int32_t n = lm.n_segments;
  RegionGraph g;
  g.source = lm;
  g.regions.resize(n);
  std::vector<std::vector<double>> hist_acc(n, std::vector<double>(kHistBins, 0.0));
  for (std::int32_t i = 0; i < n; ++i) {
    Region& r = g.regions[i];
    r.id = i;
    r.min_x = lm.width;
    r.min_y = lm.height;
    r.max_x = -1;
    r.max_y = -1;
  }

  std::vector<std::array<double, 3>> lab_sum(n, {0, 0, 0});
  for (int y = 0; y < lm.height; ++y) {
    for (int x = 0; x < lm.width; ++x) {
      const std::int32_t label = lm.at(x, y);
      if (label < 0 || label >= n)
        throw Error(ErrorCode::InvalidArgument, "label out of range");
      Region& r = g.regions[label];
      r.pixel_count++;
      const float* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) lab_sum[label][c] += p[c];
      hist_acc[label][lab_bin(p)] += 1.0;
      r.min_x = std::min(r.min_x, x);
      r.min_y = std::min(r.min_y, y);
      r.max_x = std::max(r.max_x, x);
      r.max_y = std::max(r.max_y, y);
    }
  }
  for (std::int32_t i = 0; i < n; ++i) {
    Region& r = g.regions[i];
    if (r.pixel_count == 0)
      throw Error(ErrorCode::InvalidArgument, "label map has an empty label");
    for (int c = 0; c < 3; ++c) r.mean_lab[c] = lab_sum[i][c] / r.pixel_count;
    r.histogram.resize(kHistBins);
    for (int b = 0; b < kHistBins; ++b)
      r.histogram[b] = static_cast<float>(hist_acc[i][b] / r.pixel_count);
  }

  // 4-adjacency; boundary length counts adjacent pixel pairs
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> boundary;
  for (int y = 0; y < lm.height; ++y) {
    for (int x = 0; x < lm.width; ++x) {
      const std::int32_t a = lm.at(x, y);
      if (x + 1 < lm.width) {
        const std::int32_t b = lm.at(x + 1, y);
        if (a != b) boundary[{std::min(a, b), std::max(a, b)}]++;
      }
      if (y + 1 < lm.height) {
        const std::int32_t b = lm.at(x, y + 1);
        if (a != b) boundary[{std::min(a, b), std::max(a, b)}]++;
      }
    }
  }
  g.edges.reserve(boundary.size());
  for (const auto& [pair, len] : boundary) {
    RegionEdge e;
    e.a = pair.first;
    e.b = pair.second;
    e.shared_boundary_len = len;
    e.color_dist = mean_color_dist(g.regions[e.a].mean_lab, g.regions[e.b].mean_lab);
    e.hist_dist = chi_squared_distance(g.regions[e.a].histogram, g.regions[e.b].histogram);
    g.edges.push_back(e);
  }
  return g;
}

LabelMap hierarchical_merge(const RegionGraph& g, const MergeConfig& cfg,
                            MergeDiagnostics* diag) {
  if (g.regions.empty())
    throw Error(ErrorCode::InvalidArgument, "empty region graph");

  MergeState st(g);

  // stage 1: pure mean-color agglomeration
  agglomerate(st, cfg.stage1_color_thresh,
              [&](std::int32_t a, std::int32_t b) { return st.color_dist(a, b); });
  const std::size_t stage1_merges = st.merges;

  // stage 2: weighted color + histogram + boundary-support score
  agglomerate(st, cfg.stage2_score_thresh, [&](std::int32_t a, std::int32_t b) {
    const double color = st.color_dist(a, b) / 100.0;
    const double hist = st.hist_dist(a, b);
    const std::int64_t bl = st.adj[a].at(b);
    const std::int64_t per = std::min(st.perimeter[a], st.perimeter[b]);
    const double support = per > 0 ? static_cast<double>(bl) / per : 1.0;
    return cfg.w_color * color + cfg.w_hist * hist + cfg.w_boundary * (1.0 - support);
  });

  if (diag) {
    diag->stage1_merges = stage1_merges;
    diag->stage2_merges = st.merges - stage1_merges;
  }

  // densely relabel the source raster through the union-find
  LabelMap out;
  out.width = g.source.width;
  out.height = g.source.height;
  out.labels.assign(g.source.labels.size(), -1);
  std::vector<std::int32_t> remap(g.regions.size(), -1);
  std::int32_t next_id = 0;
  for (std::size_t i = 0; i < g.source.labels.size(); ++i) {
    const std::int32_t r = st.find(g.source.labels[i]);
    if (remap[r] < 0) remap[r] = next_id++;
    out.labels[i] = remap[r];
  }
  out.n_segments = next_id;
  return out;
}

}  // namespace strkit
