#include "gila/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "gila/errors.hpp"
#include "gila/random.hpp"

namespace gila {

namespace {

constexpr int kMaxLloydIterations = 100;
constexpr int kRestarts = 5;

std::vector<Vec2> seed_centroids(std::span<const Vec2> pts, std::uint32_t k, SplitMix& rng) {
  std::vector<Vec2> c;
  c.reserve(k);
  c.push_back(pts[rng.below(pts.size())]);
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = (pts[i] - c[0]).norm2();
  while (c.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0) {
      double r = rng.uniform() * total;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        r -= d2[i];
        if (r < 0 && d2[i] > 0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(pts.size());
    }
    c.push_back(pts[pick]);
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = std::min(d2[i], (pts[i] - c.back()).norm2());
  }
  return c;
}

std::uint32_t nearest(const Vec2& p, const std::vector<Vec2>& c) {
  std::uint32_t best = 0;
  double best_d = (p - c[0]).norm2();
  for (std::uint32_t j = 1; j < c.size(); ++j) {
    const double d = (p - c[j]).norm2();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

std::vector<Vec2> centroids_of(std::span<const Vec2> pts, std::span<const std::uint32_t> label,
                               std::uint32_t k, std::vector<std::size_t>* sizes = nullptr) {
  std::vector<Vec2> sum(k);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sum[label[i]] += pts[i];
    ++count[label[i]];
  }
  for (std::uint32_t j = 0; j < k; ++j)
    if (count[j]) sum[j] = sum[j] * (1.0 / static_cast<double>(count[j]));
  if (sizes) *sizes = std::move(count);
  return sum;
}

ClusterAssignment lloyd(std::span<const Vec2> pts, std::uint32_t k, SplitMix& rng,
                        std::vector<double>* trace) {
  auto centroids = seed_centroids(pts, k, rng);
  std::vector<std::uint32_t> label(pts.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint32_t> next(pts.size());
  for (int it = 0; it < kMaxLloydIterations; ++it) {
    for (std::size_t i = 0; i < pts.size(); ++i) next[i] = nearest(pts[i], centroids);
    // Refill empty clusters with the point farthest from its centroid among
    // clusters that can spare one.
    std::vector<std::size_t> size(k, 0);
    for (auto l : next) ++size[l];
    for (std::uint32_t j = 0; j < k; ++j) {
      if (size[j]) continue;
      std::size_t far = pts.size();
      double far_d = -1.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (size[next[i]] < 2) continue;
        const double d = (pts[i] - centroids[next[i]]).norm2();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --size[next[far]];
      next[far] = j;
      size[j] = 1;
    }
    const bool stable = next == label;
    label.swap(next);
    centroids = centroids_of(pts, label, k);
    if (trace) {
      double w = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) w += (pts[i] - centroids[label[i]]).norm2();
      trace->push_back(w);
    }
    if (stable) break;
  }
  return {std::move(label), std::move(centroids), k};
}

}  // namespace

double within_ss(std::span<const Vec2> points, const ClusterAssignment& a) {
  if (a.cluster.size() != points.size()) fail(ErrorKind::Mismatch, "assignment does not cover the points");
  const auto c = centroids_of(points, a.cluster, a.k);
  double w = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) w += (points[i] - c[a.cluster[i]]).norm2();
  return w;
}

ClusterAssignment kmeans(std::span<const Vec2> points, std::uint32_t k, std::uint64_t seed,
                         std::vector<std::vector<double>>* trace) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "k must be positive");
  if (k > points.size())
    fail(ErrorKind::InvalidArgument,
         "k=" + std::to_string(k) + " exceeds the number of points (" + std::to_string(points.size()) + ")");
  for (const auto& p : points)
    if (!p.finite()) fail(ErrorKind::InvalidArgument, "non-finite point");

  SplitMix rng(hash_combine(seed, k));
  ClusterAssignment best;
  double best_w = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRestarts; ++r) {
    std::vector<double>* t = nullptr;
    if (trace) t = &trace->emplace_back();
    auto a = lloyd(points, k, rng, t);
    const double w = within_ss(points, a);
    if (w < best_w) {
      best_w = w;
      best = std::move(a);
    }
  }
  return best;
}

double calinski_harabasz(std::span<const Vec2> points, const ClusterAssignment& a) {
  const std::size_t n = points.size();
  if (a.k < 2) fail(ErrorKind::InvalidArgument, "Calinski-Harabasz index needs k >= 2");
  if (n <= a.k) fail(ErrorKind::InvalidArgument, "Calinski-Harabasz index needs more points than clusters");
  if (a.cluster.size() != n) fail(ErrorKind::Mismatch, "assignment does not cover the points");
  std::vector<std::size_t> size;
  const auto c = centroids_of(points, a.cluster, a.k, &size);
  Vec2 mean;
  for (const auto& p : points) mean += p;
  mean = mean * (1.0 / static_cast<double>(n));
  double between = 0.0;
  for (std::uint32_t j = 0; j < a.k; ++j) between += static_cast<double>(size[j]) * (c[j] - mean).norm2();
  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) within += (points[i] - c[a.cluster[i]]).norm2();
  // Centroids of identical points can be off by an ulp; treat that as zero.
  if (within <= 1e-24 * (between + within)) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(a.k - 1)) / (within / static_cast<double>(n - a.k));
}

KSelection select_k_detailed(std::span<const Vec2> points, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (n < 4) fail(ErrorKind::InvalidArgument, "select_k needs at least 4 points");
  KSelection sel;
  sel.k0 = std::sqrt(static_cast<double>(n) / 2.0);
  sel.window = std::max<std::uint32_t>(2, static_cast<std::uint32_t>(std::ceil(sel.k0 / 4.0)));
  const auto k_max = static_cast<std::uint32_t>(n - 1);
  const auto w = static_cast<std::int64_t>(sel.window);
  auto lo = static_cast<std::uint32_t>(std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(sel.k0)) - w));
  auto hi = static_cast<std::uint32_t>(std::min<std::int64_t>(k_max, static_cast<std::int64_t>(std::ceil(sel.k0)) + w));
  lo = std::min(lo, hi);

  std::map<std::uint32_t, std::pair<double, ClusterAssignment>> scored;
  auto evaluate = [&](std::uint32_t k) {
    if (k < 2 || k > k_max || scored.count(k)) return;
    auto a = kmeans(points, k, seed);
    const double ch = calinski_harabasz(points, a);
    scored.emplace(k, std::pair{ch, std::move(a)});
  };
  for (std::uint32_t k = lo; k <= hi; ++k) evaluate(k);
  // Sparse probes below the window, 2, 3, 4, 6, 9, ...
  for (std::uint32_t k = 2; k < lo; k = std::max(k + 1, k * 3 / 2)) evaluate(k);

  for (;;) {
    auto best = scored.begin();
    for (auto it = scored.begin(); it != scored.end(); ++it)
      if (it->second.first > best->second.first) best = it;
    const std::uint32_t kb = best->first;
    if (kb == 2 || scored.count(kb - 1)) break;
    const auto prev = std::prev(scored.find(kb))->first;
    for (std::uint32_t k = prev + 1; k < kb; ++k) evaluate(k);
  }
  auto best = scored.begin();
  for (auto it = scored.begin(); it != scored.end(); ++it)
    if (it->second.first > best->second.first) best = it;
  for (const auto& [k, entry] : scored) sel.scores.emplace_back(k, entry.first);
  sel.best = std::move(best->second.second);
  return sel;
}

ClusterAssignment select_k(std::span<const Vec2> points, std::uint64_t seed) {
  return select_k_detailed(points, seed).best;
}

void write_clusters(const Graph& g, const ClusterAssignment& a, const std::filesystem::path& path) {
  if (a.cluster.size() != g.vertex_count()) fail(ErrorKind::Mismatch, "assignment does not cover the graph");
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << "% vertex cluster\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << g.external_id(v) << ' ' << a.cluster[v] << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gila
