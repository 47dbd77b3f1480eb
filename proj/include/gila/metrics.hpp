#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gila/geometry.hpp"
#include "gila/graph.hpp"

namespace gila {

/// Drawing quality for one (graph, layout) pair.
struct QualityReport {
  double cre = 0.0;
  double eld = 0.0;
  double sim_raw = 0.0;
  std::uint64_t crossings = 0;
};

/// Number of pairs of edges without a shared endpoint whose closed segments
/// intersect. Coordinates are snapped to a 1e-9 grid and tested with exact
/// integer orientation predicates.
std::uint64_t count_crossings(const Graph& g, std::span<const Vec2> pos);
/// Same answer by testing every pair; the reference the grid version is held to.
std::uint64_t count_crossings_pairwise(const Graph& g, std::span<const Vec2> pos);

double crossings_per_edge(const Graph& g, std::span<const Vec2> pos);

/// Population standard deviation of edge lengths.
double edge_length_sd(const Graph& g, std::span<const Vec2> pos);

/// Gabriel graph of the point set: (u,v) is an edge iff no other point lies in
/// the closed disk with diameter uv. Exactly coincident points are nudged
/// apart by 1e-9 first.
Graph gabriel_graph(std::span<const Vec2> points);

/// Sum over vertices of |N_g(v) & N_p(v)| / |N_g(v) | N_p(v)|, counting 1 for
/// vertices isolated in both.
double jaccard_similarity(const Graph& g, const Graph& proximity);

QualityReport measure_quality(const Graph& g, std::span<const Vec2> pos);

/// key=value lines.
std::string format_report(const QualityReport& r);

/// Clustering indices normalised so that 1 is best.
struct ClusterQuality {
  double performance = 0.0;
  double coverage = 0.0;
  /// 1 - max over clusters of cut(C) / min(vol(C), vol(V \ C)).
  double conductance = 0.0;
  /// Newman modularity clamped to [0,1].
  double modularity = 0.0;
  /// Modularity before clamping.
  double modularity_raw = 0.0;
};

ClusterQuality clustering_quality(const Graph& g, std::span<const std::uint32_t> cluster);

}  // namespace gila
