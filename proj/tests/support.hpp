#pragma once
// Independent oracles and instance builders shared by unit tests and the
// acceptance runner. Nothing here calls into the code under test except to
// construct graphs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "gila/geometry.hpp"
#include "gila/graph.hpp"
#include "gila/random.hpp"

namespace testing_support {

using gila::Graph;
using gila::Vec2;
using gila::VertexId;
using Edge = std::pair<VertexId, VertexId>;

inline Graph make_graph(std::size_t n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId i = 0; i < n; ++i) e.emplace_back(i, static_cast<VertexId>((i + 1) % n));
  return make_graph(n, e);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (VertexId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return make_graph(leaves + 1, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

// Disjoint union of `count` cliques of `size` vertices, numbered block by block.
inline Graph disjoint_cliques(std::size_t count, std::size_t size) {
  std::vector<Edge> e;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j)
        e.emplace_back(static_cast<VertexId>(c * size + i), static_cast<VertexId>(c * size + j));
  return make_graph(count * size, e);
}

inline Graph two_triangles() { return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

// Uniform G(n, m) by rejection. Isolated vertices stay.
inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  gila::SplitMix rng(seed);
  std::set<Edge> es;
  m = std::min(m, n * (n - 1) / 2);
  while (es.size() < m) {
    auto a = static_cast<VertexId>(rng.below(n));
    auto b = static_cast<VertexId>(rng.below(n));
    if (a == b) continue;
    es.insert({std::min(a, b), std::max(a, b)});
  }
  return make_graph(n, {es.begin(), es.end()});
}

// Two ER clusters of `per` vertices and `m_each` edges, joined by `bridges`
// edges. Vertices [0, per) form cluster 0.
inline Graph planted_two_cluster(std::uint64_t seed, std::size_t per = 50, std::size_t m_each = 125,
                                 std::size_t bridges = 3) {
  gila::SplitMix rng(seed);
  std::set<Edge> es;
  for (std::size_t c = 0; c < 2; ++c) {
    std::size_t got = 0;
    while (got < m_each) {
      auto a = static_cast<VertexId>(c * per + rng.below(per));
      auto b = static_cast<VertexId>(c * per + rng.below(per));
      if (a == b) continue;
      if (es.insert({std::min(a, b), std::max(a, b)}).second) ++got;
    }
  }
  std::size_t got = 0;
  while (got < bridges) {
    auto a = static_cast<VertexId>(rng.below(per));
    auto b = static_cast<VertexId>(per + rng.below(per));
    if (es.insert({a, b}).second) ++got;
  }
  return make_graph(2 * per, {es.begin(), es.end()});
}

// Isotropic Gaussian blobs, point i in blob i % centres.size().
inline std::vector<Vec2> gaussian_blobs(std::span<const Vec2> centres, std::size_t n, double sigma,
                                        std::uint64_t seed) {
  gila::SplitMix rng(seed);
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1)) * sigma;
    const double t = 2.0 * M_PI * u2;
    pts.push_back(centres[i % centres.size()] + Vec2{r * std::cos(t), r * std::sin(t)});
  }
  return pts;
}

inline std::vector<Vec2> random_points(std::size_t n, double extent, std::uint64_t seed) {
  gila::SplitMix rng(seed);
  std::vector<Vec2> pts(n);
  for (auto& p : pts) p = {rng.uniform() * extent, rng.uniform() * extent};
  return pts;
}

// ---------------------------------------------------------------------------
// Oracles

// Vertices at hop distance 1..k from v (plain BFS over an adjacency list).
inline std::set<VertexId> bfs_ball(const Graph& g, VertexId v, std::uint32_t k) {
  std::map<VertexId, std::uint32_t> dist{{v, 0}};
  std::deque<VertexId> queue{v};
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    if (dist[u] == k) continue;
    for (VertexId w : g.neighbors(u))
      if (!dist.count(w)) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  std::set<VertexId> out;
  for (auto [u, d] : dist)
    if (u != v) out.insert(u);
  return out;
}

// Sequential BFS labelling with the smallest vertex id of each component.
inline std::vector<VertexId> bfs_components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> label(n, static_cast<VertexId>(n));
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    std::deque<VertexId> q{s};
    label[s] = s;
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop_front();
      for (VertexId w : g.neighbors(u))
        if (label[w] == n) {
          label[w] = s;
          q.push_back(w);
        }
    }
  }
  return label;
}

// Closed-segment intersection with long double parametric solving; the
// collinear case falls back to interval overlap on the dominant axis. Meant
// for coordinates with few significant digits, where it is exact.
inline bool segments_intersect_param(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  using L = long double;
  const L rx = L(b.x) - a.x, ry = L(b.y) - a.y;
  const L sx = L(d.x) - c.x, sy = L(d.y) - c.y;
  const L qx = L(c.x) - a.x, qy = L(c.y) - a.y;
  const L denom = rx * sy - ry * sx;
  const L num_t = qx * sy - qy * sx;
  const L num_u = qx * ry - qy * rx;
  if (denom == 0) {
    if (num_t != 0 || num_u != 0) return false;  // parallel, distinct lines
    if (rx == 0 && ry == 0 && sx == 0 && sy == 0) return a == c;
    const bool use_x = std::fabs(static_cast<double>(rx)) + std::fabs(static_cast<double>(sx)) >=
                       std::fabs(static_cast<double>(ry)) + std::fabs(static_cast<double>(sy));
    L a0 = use_x ? a.x : a.y, a1 = use_x ? b.x : b.y;
    L c0 = use_x ? c.x : c.y, c1 = use_x ? d.x : d.y;
    if (a0 > a1) std::swap(a0, a1);
    if (c0 > c1) std::swap(c0, c1);
    return std::max(a0, c0) <= std::min(a1, c1);
  }
  L t = num_t / denom, u = num_u / denom;
  return t >= 0 && t <= 1 && u >= 0 && u <= 1;
}

inline std::uint64_t brute_force_crossings(const Graph& g, std::span<const Vec2> pos) {
  const auto edges = g.edges();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      auto [a, b] = edges[i];
      auto [c, d] = edges[j];
      if (a == c || a == d || b == c || b == d) continue;
      if (segments_intersect_param(pos[a], pos[b], pos[c], pos[d])) ++count;
    }
  return count;
}

// Definition-literal Gabriel graph, O(n^3).
inline std::set<Edge> gabriel_oracle(std::span<const Vec2> p) {
  std::set<Edge> out;
  auto d2 = [](Vec2 a, Vec2 b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); };
  for (VertexId u = 0; u < p.size(); ++u)
    for (VertexId v = u + 1; v < p.size(); ++v) {
      bool empty = true;
      for (VertexId w = 0; w < p.size() && empty; ++w)
        if (w != u && w != v && d2(p[u], p[w]) + d2(p[w], p[v]) <= d2(p[u], p[v])) empty = false;
      if (empty) out.insert({u, v});
    }
  return out;
}

inline std::set<Edge> edge_set(const Graph& g) {
  auto e = g.edges();
  std::set<Edge> out;
  for (auto [u, v] : e) out.insert({std::min(u, v), std::max(u, v)});
  return out;
}

inline double jaccard_oracle(const Graph& a, const Graph& b) {
  double total = 0.0;
  for (VertexId v = 0; v < a.vertex_count(); ++v) {
    std::set<VertexId> na(a.neighbors(v).begin(), a.neighbors(v).end());
    std::set<VertexId> nb(b.neighbors(v).begin(), b.neighbors(v).end());
    std::set<VertexId> inter, uni;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::inserter(inter, inter.begin()));
    std::set_union(na.begin(), na.end(), nb.begin(), nb.end(), std::inserter(uni, uni.begin()));
    total += uni.empty() ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  }
  return total;
}

// Two-pass population standard deviation.
inline double two_pass_sd(std::span<const double> xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

// Minimum within-cluster sum of squares over every 2-partition into non-empty parts.
inline double best_two_partition_wss(std::span<const Vec2> p) {
  const std::size_t n = p.size();
  double best = INFINITY;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    if (mask & 1) continue;  // fix point 0 in part 0, skipping mirror images
    Vec2 c[2];
    double cnt[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int s = (mask >> i) & 1;
      c[s] += p[i];
      cnt[s] += 1;
    }
    c[0] = c[0] * (1.0 / cnt[0]);
    c[1] = c[1] * (1.0 / cnt[1]);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += (p[i] - c[(mask >> i) & 1]).norm2();
    best = std::min(best, w);
  }
  return best;
}

inline std::uint64_t cut_of(const Graph& g, std::span<const std::uint32_t> label) {
  std::uint64_t cut = 0;
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v && label[u] != label[v]) ++cut;
  return cut;
}

// (distance between the two planted cluster centroids) / (mean intra-cluster edge length)
inline double separation_ratio(const Graph& g, std::span<const Vec2> p, std::size_t per) {
  Vec2 c[2];
  double cnt[2] = {0, 0};
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    c[v >= per] += p[v];
    cnt[v >= per] += 1;
  }
  c[0] = c[0] * (1.0 / cnt[0]);
  c[1] = c[1] * (1.0 / cnt[1]);
  double s = 0.0;
  std::size_t k = 0;
  for (auto [u, v] : g.edges())
    if ((u >= per) == (v >= per)) {
      s += gila::distance(p[u], p[v]);
      ++k;
    }
  return gila::distance(c[0], c[1]) / (s / static_cast<double>(k));
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace testing_support
