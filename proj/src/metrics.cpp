#include "gila/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <boost/polygon/voronoi.hpp>

#include "gila/errors.hpp"

namespace gila {

// ---------------------------------------------------------------------------
// Crossings.

namespace {

struct GridPoint {
  std::int64_t x;
  std::int64_t y;
};

constexpr double kSnap = 1e9;
constexpr double kMaxCoordinate = 1e9;

GridPoint snap(const Vec2& p) {
  if (!p.finite() || std::fabs(p.x) > kMaxCoordinate || std::fabs(p.y) > kMaxCoordinate)
    fail(ErrorKind::InvalidArgument, "coordinate outside the supported range for crossing tests");
  return {std::llround(p.x * kSnap), std::llround(p.y * kSnap)};
}

int orientation(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  const __int128 v = static_cast<__int128>(b.x - a.x) * (c.y - a.y) -
                     static_cast<__int128>(b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

bool within_box(const GridPoint& a, const GridPoint& b, const GridPoint& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(const GridPoint& a, const GridPoint& b, const GridPoint& c, const GridPoint& d) {
  const int o1 = orientation(c, d, a);
  const int o2 = orientation(c, d, b);
  const int o3 = orientation(a, b, c);
  const int o4 = orientation(a, b, d);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within_box(c, d, a)) return true;
  if (o2 == 0 && within_box(c, d, b)) return true;
  if (o3 == 0 && within_box(a, b, c)) return true;
  if (o4 == 0 && within_box(a, b, d)) return true;
  return false;
}

struct Segment {
  VertexId u;
  VertexId v;
  GridPoint a;
  GridPoint b;
  std::int64_t min_x, max_x, min_y, max_y;
};

std::vector<Segment> segments_of(const Graph& g, std::span<const Vec2> pos) {
  if (pos.size() != g.vertex_count())
    fail(ErrorKind::Mismatch, "layout covers " + std::to_string(pos.size()) + " vertices, graph has " +
                                  std::to_string(g.vertex_count()));
  std::vector<GridPoint> snapped(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) snapped[i] = snap(pos[i]);
  std::vector<Segment> segs;
  segs.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) {
    const auto a = snapped[u];
    const auto b = snapped[v];
    segs.push_back({u, v, a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                    std::max(a.y, b.y)});
  }
  return segs;
}

bool crossing_pair(const Segment& s, const Segment& t) {
  if (s.u == t.u || s.u == t.v || s.v == t.u || s.v == t.v) return false;
  if (s.max_x < t.min_x || t.max_x < s.min_x || s.max_y < t.min_y || t.max_y < s.min_y) return false;
  return segments_meet(s.a, s.b, t.a, t.b);
}

std::uint64_t pairwise(const std::vector<Segment>& segs) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (crossing_pair(segs[i], segs[j])) ++count;
  return count;
}

}  // namespace

std::uint64_t count_crossings_pairwise(const Graph& g, std::span<const Vec2> pos) {
  return pairwise(segments_of(g, pos));
}

std::uint64_t count_crossings(const Graph& g, std::span<const Vec2> pos) {
  const auto segs = segments_of(g, pos);
  if (segs.size() < 256) return pairwise(segs);

  // Uniform grid: each pair is tested once, in the lowest cell shared by the
  // cell ranges of both bounding boxes.
  std::int64_t lo_x = std::numeric_limits<std::int64_t>::max(), lo_y = lo_x;
  std::int64_t hi_x = std::numeric_limits<std::int64_t>::min(), hi_y = hi_x;
  for (const auto& s : segs) {
    lo_x = std::min(lo_x, s.min_x);
    lo_y = std::min(lo_y, s.min_y);
    hi_x = std::max(hi_x, s.max_x);
    hi_y = std::max(hi_y, s.max_y);
  }
  const auto side = static_cast<std::int64_t>(
      std::clamp(std::sqrt(static_cast<double>(segs.size())), 1.0, 4096.0));
  const double span_x = static_cast<double>(hi_x - lo_x) + 1.0;
  const double span_y = static_cast<double>(hi_y - lo_y) + 1.0;
  auto cell_x = [&](std::int64_t x) {
    return std::min<std::int64_t>(side - 1, static_cast<std::int64_t>(static_cast<double>(x - lo_x) / span_x * side));
  };
  auto cell_y = [&](std::int64_t y) {
    return std::min<std::int64_t>(side - 1, static_cast<std::int64_t>(static_cast<double>(y - lo_y) / span_y * side));
  };

  struct Range {
    std::int64_t x0, x1, y0, y1;
  };
  std::vector<Range> ranges(segs.size());
  std::uint64_t insertions = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    ranges[i] = {cell_x(segs[i].min_x), cell_x(segs[i].max_x), cell_y(segs[i].min_y), cell_y(segs[i].max_y)};
    insertions += static_cast<std::uint64_t>((ranges[i].x1 - ranges[i].x0 + 1) * (ranges[i].y1 - ranges[i].y0 + 1));
  }
  if (insertions > 64 * segs.size()) return pairwise(segs);

  std::vector<std::size_t> start(static_cast<std::size_t>(side * side) + 1, 0);
  for (const auto& r : ranges)
    for (auto y = r.y0; y <= r.y1; ++y)
      for (auto x = r.x0; x <= r.x1; ++x) ++start[static_cast<std::size_t>(y * side + x) + 1];
  for (std::size_t c = 0; c + 1 < start.size(); ++c) start[c + 1] += start[c];
  std::vector<std::uint32_t> members(insertions);
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < ranges.size(); ++i)
      for (auto y = ranges[i].y0; y <= ranges[i].y1; ++y)
        for (auto x = ranges[i].x0; x <= ranges[i].x1; ++x)
          members[cursor[static_cast<std::size_t>(y * side + x)]++] = static_cast<std::uint32_t>(i);
  }

  std::uint64_t count = 0;
  for (std::int64_t cy = 0; cy < side; ++cy)
    for (std::int64_t cx = 0; cx < side; ++cx) {
      const auto c = static_cast<std::size_t>(cy * side + cx);
      for (std::size_t a = start[c]; a < start[c + 1]; ++a)
        for (std::size_t b = a + 1; b < start[c + 1]; ++b) {
          const auto& ra = ranges[members[a]];
          const auto& rb = ranges[members[b]];
          if (std::max(ra.x0, rb.x0) != cx || std::max(ra.y0, rb.y0) != cy) continue;
          if (crossing_pair(segs[members[a]], segs[members[b]])) ++count;
        }
    }
  return count;
}

double crossings_per_edge(const Graph& g, std::span<const Vec2> pos) {
  if (g.edge_count() == 0) fail(ErrorKind::InvalidArgument, "crossings per edge undefined without edges");
  return static_cast<double>(count_crossings(g, pos)) / static_cast<double>(g.edge_count());
}

double edge_length_sd(const Graph& g, std::span<const Vec2> pos) {
  if (pos.size() != g.vertex_count()) fail(ErrorKind::Mismatch, "layout does not cover the graph");
  if (g.edge_count() == 0) fail(ErrorKind::InvalidArgument, "edge length deviation undefined without edges");
  // Welford's running update.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (auto [u, v] : g.edges()) {
    const double len = distance(pos[u], pos[v]);
    ++count;
    const double delta = len - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (len - mean);
  }
  return std::sqrt(std::max(0.0, m2 / static_cast<double>(count)));
}

// ---------------------------------------------------------------------------
// Gabriel graph.

namespace {

class PointGrid {
 public:
  explicit PointGrid(std::span<const Vec2> pts) : pts_(pts) {
    for (const auto& p : pts) box_.add(p);
    side_ = static_cast<std::size_t>(std::clamp(std::sqrt(static_cast<double>(pts.size()) / 2.0), 1.0, 2048.0));
    cell_w_ = std::max(box_.width(), 1e-300) / static_cast<double>(side_);
    cell_h_ = std::max(box_.height(), 1e-300) / static_cast<double>(side_);
    start_.assign(side_ * side_ + 1, 0);
    for (const auto& p : pts) ++start_[cell_of(p) + 1];
    for (std::size_t c = 0; c + 1 < start_.size(); ++c) start_[c + 1] += start_[c];
    members_.resize(pts.size());
    std::vector<std::size_t> cursor(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) members_[cursor[cell_of(pts[i])]++] = static_cast<VertexId>(i);
  }

  /// True if some point other than u, v lies in the closed disk with diameter uv.
  bool disk_occupied(VertexId u, VertexId v) const {
    const Vec2 a = pts_[u];
    const Vec2 b = pts_[v];
    const double duv = (a - b).norm2();
    const Vec2 mid = (a + b) * 0.5;
    const double r = 0.5 * std::sqrt(duv) * (1.0 + 1e-12) + 1e-300;
    const auto [x0, y0] = index_of({mid.x - r, mid.y - r});
    const auto [x1, y1] = index_of({mid.x + r, mid.y + r});
    for (std::size_t cy = y0; cy <= y1; ++cy)
      for (std::size_t cx = x0; cx <= x1; ++cx) {
        const std::size_t c = cy * side_ + cx;
        for (std::size_t i = start_[c]; i < start_[c + 1]; ++i) {
          const VertexId w = members_[i];
          if (w == u || w == v) continue;
          if ((a - pts_[w]).norm2() + (pts_[w] - b).norm2() <= duv) return true;
        }
      }
    return false;
  }

 private:
  std::pair<std::size_t, std::size_t> index_of(const Vec2& p) const {
    auto clampi = [&](double t) {
      if (!(t > 0)) return std::size_t{0};
      return std::min(side_ - 1, static_cast<std::size_t>(t));
    };
    return {clampi((p.x - box_.min.x) / cell_w_), clampi((p.y - box_.min.y) / cell_h_)};
  }
  std::size_t cell_of(const Vec2& p) const {
    const auto [x, y] = index_of(p);
    return y * side_ + x;
  }

  std::span<const Vec2> pts_;
  BoundingBox box_;
  std::size_t side_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::size_t> start_;
  std::vector<VertexId> members_;
};

// Delaunay edges of the point set (quantized onto a 2^30 integer grid for the
// Voronoi builder). Points that share a grid cell are linked to the cell's
// representative and inherit its candidates.
std::vector<std::pair<VertexId, VertexId>> delaunay_candidates(std::span<const Vec2> pts) {
  BoundingBox box;
  for (const auto& p : pts) box.add(p);
  const double extent = std::max({box.width(), box.height(), 1e-300});
  const double scale = static_cast<double>(1 << 30) / extent;

  using IPoint = boost::polygon::point_data<int>;
  std::map<std::pair<int, int>, VertexId> cell_owner;
  std::vector<IPoint> sites;
  std::vector<VertexId> site_vertex;
  std::vector<std::vector<VertexId>> twins;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int x = static_cast<int>(std::llround((pts[i].x - box.min.x) * scale));
    const int y = static_cast<int>(std::llround((pts[i].y - box.min.y) * scale));
    auto [it, fresh] = cell_owner.emplace(std::pair{x, y}, static_cast<VertexId>(sites.size()));
    if (fresh) {
      sites.emplace_back(x, y);
      site_vertex.push_back(static_cast<VertexId>(i));
      twins.emplace_back();
    } else {
      twins[it->second].push_back(static_cast<VertexId>(i));
    }
  }

  std::vector<std::pair<VertexId, VertexId>> out;
  if (sites.size() >= 2) {
    boost::polygon::voronoi_diagram<double> vd;
    boost::polygon::construct_voronoi(sites.begin(), sites.end(), &vd);
    for (const auto& edge : vd.edges()) {
      const auto a = edge.cell()->source_index();
      const auto b = edge.twin()->cell()->source_index();
      if (a >= b) continue;
      for (VertexId u : [&] { auto v = twins[a]; v.push_back(site_vertex[a]); return v; }())
        for (VertexId w : [&] { auto v = twins[b]; v.push_back(site_vertex[b]); return v; }())
          out.emplace_back(std::min(u, w), std::max(u, w));
    }
  }
  for (std::size_t s = 0; s < twins.size(); ++s)
    for (VertexId t : twins[s]) out.emplace_back(std::min(t, site_vertex[s]), std::max(t, site_vertex[s]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Graph gabriel_graph(std::span<const Vec2> points) {
  if (points.size() < 2) fail(ErrorKind::InvalidArgument, "a Gabriel graph needs at least two points");
  for (const auto& p : points)
    if (!p.finite()) fail(ErrorKind::InvalidArgument, "non-finite point");

  std::vector<Vec2> pts(points.begin(), points.end());
  {
    std::vector<VertexId> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<VertexId>(i);
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
      return std::pair{pts[a].x, pts[a].y} < std::pair{pts[b].x, pts[b].y};
    });
    std::size_t nudged = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (points[order[i]] == points[order[i - 1]]) {
        const double k = static_cast<double>(++nudged);
        pts[order[i]] += Vec2{1e-9 * k, 1e-9 * k};
      }
    }
    if (nudged) std::clog << "warning: " << nudged << " coincident points nudged by 1e-9\n";
  }

  const PointGrid grid(pts);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (auto [u, v] : delaunay_candidates(pts))
    if (!grid.disk_occupied(u, v)) edges.emplace_back(u, v);
  return Graph::from_edges(pts.size(), edges);
}

double jaccard_similarity(const Graph& g, const Graph& proximity) {
  if (g.vertex_count() != proximity.vertex_count())
    fail(ErrorKind::Mismatch, "graphs have different vertex sets");
  double total = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto a = g.neighbors(v);
    const auto b = proximity.neighbors(v);
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        ++common;
        ++i;
        ++j;
      }
    }
    const std::size_t uni = a.size() + b.size() - common;
    total += uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
  }
  return total;
}

QualityReport measure_quality(const Graph& g, std::span<const Vec2> pos) {
  QualityReport r;
  r.crossings = count_crossings(g, pos);
  r.cre = static_cast<double>(r.crossings) / static_cast<double>(g.edge_count());
  r.eld = edge_length_sd(g, pos);
  r.sim_raw = jaccard_similarity(g, gabriel_graph(pos));
  return r;
}

std::string format_report(const QualityReport& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << "crossings=" << r.crossings << '\n'
     << "CRE=" << r.cre << '\n'
     << "ELD=" << r.eld << '\n'
     << "SIM_raw=" << r.sim_raw << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Clustering indices.

ClusterQuality clustering_quality(const Graph& g, std::span<const std::uint32_t> cluster) {
  const std::size_t n = g.vertex_count();
  const double m = static_cast<double>(g.edge_count());
  if (cluster.size() != n) fail(ErrorKind::Mismatch, "cluster assignment does not cover the graph");
  if (g.edge_count() == 0) fail(ErrorKind::InvalidArgument, "clustering quality undefined without edges");

  std::map<std::uint32_t, std::size_t> index;
  for (auto c : cluster) index.emplace(c, 0);
  std::size_t next = 0;
  for (auto& [c, i] : index) i = next++;
  const std::size_t k = index.size();

  std::vector<double> size(k, 0), intra(k, 0), vol(k, 0), cut(k, 0);
  for (VertexId v = 0; v < n; ++v) {
    const auto cv = index[cluster[v]];
    size[cv] += 1;
    vol[cv] += static_cast<double>(g.neighbors(v).size());
  }
  for (auto [u, v] : g.edges()) {
    const auto cu = index[cluster[u]];
    const auto cv = index[cluster[v]];
    if (cu == cv) {
      intra[cu] += 1;
    } else {
      cut[cu] += 1;
      cut[cv] += 1;
    }
  }

  double intra_total = 0.0;
  double intra_pairs = 0.0;
  double modularity = 0.0;
  double worst = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    intra_total += intra[c];
    intra_pairs += size[c] * (size[c] - 1) / 2.0;
    modularity += intra[c] / m - (vol[c] / (2 * m)) * (vol[c] / (2 * m));
    const double denom = std::min(vol[c], 2 * m - vol[c]);
    if (denom > 0) worst = std::max(worst, cut[c] / denom);
  }
  const double pairs = static_cast<double>(n) * (static_cast<double>(n) - 1) / 2.0;
  const double inter_pairs = pairs - intra_pairs;
  const double inter_edges = m - intra_total;

  ClusterQuality q;
  q.coverage = intra_total / m;
  q.performance = pairs > 0 ? (intra_total + (inter_pairs - inter_edges)) / pairs : 1.0;
  q.conductance = 1.0 - worst;
  q.modularity_raw = modularity;
  q.modularity = std::clamp(modularity, 0.0, 1.0);
  return q;
}

}  // namespace gila
