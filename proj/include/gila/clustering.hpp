#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gila/geometry.hpp"
#include "gila/graph.hpp"

namespace gila {

struct ClusterAssignment {
  /// Cluster index per point, in [0, k).
  std::vector<std::uint32_t> cluster;
  std::vector<Vec2> centroids;
  std::uint32_t k = 0;
};

/// Lloyd iterations from k-means++ seeding, until the assignment is a fixpoint
/// or 100 iterations. Clusters that empty out are reseeded with the point
/// farthest from its centroid. Throws if k is 0 or exceeds the point count.
/// The best of several restarts is kept; `trace`, when given, receives the
/// within-cluster sum of squares after every Lloyd step of every restart.
ClusterAssignment kmeans(std::span<const Vec2> points, std::uint32_t k, std::uint64_t seed,
                         std::vector<std::vector<double>>* trace = nullptr);

/// Within-cluster sum of squared distances to the centroids.
double within_ss(std::span<const Vec2> points, const ClusterAssignment& a);

/// Calinski-Harabasz index. +infinity when the within-cluster dispersion is zero.
double calinski_harabasz(std::span<const Vec2> points, const ClusterAssignment& a);

struct KSelection {
  ClusterAssignment best;
  double k0 = 0.0;
  std::uint32_t window = 0;
  /// (k, CH) for every k evaluated, ascending k.
  std::vector<std::pair<std::uint32_t, double>> scores;
};

/// Local search for K around K0 = sqrt(n/2). Scores the window
/// [max(2, floor(K0) - w), ceil(K0) + w] with w = max(2, ceil(K0/4)) plus
/// sparse probes 2, 3, 4, 6, 9, ... below it, then fills in the gap under the
/// best k until its lower neighbour is scored too. Ties go to the smaller k.
KSelection select_k_detailed(std::span<const Vec2> points, std::uint64_t seed);
ClusterAssignment select_k(std::span<const Vec2> points, std::uint64_t seed);

/// Two columns: external vertex id, cluster.
void write_clusters(const Graph& g, const ClusterAssignment& a, const std::filesystem::path& path);

}  // namespace gila
