#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gila {

/// Dense internal vertex index in [0, n).
using VertexId = std::uint32_t;

/// Undirected simple graph in compressed adjacency form.
///
/// Vertices are compacted to 0..n-1; the identifier each vertex carried in
/// its source (file or generator) is kept in `external_id` so output can be
/// written back in the caller's id space. Neighbor lists are sorted.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `n` vertices from an edge list. Self-loops and
  /// duplicate (including reversed) pairs are dropped. When `external_ids`
  /// is empty the identity mapping is used.
  static Graph from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges,
                          std::vector<std::int64_t> external_ids = {});

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;
  bool contains(VertexId v) const noexcept { return v < vertex_count(); }

  std::int64_t external_id(VertexId v) const { return external_ids_[v]; }
  std::span<const std::int64_t> external_ids() const noexcept { return external_ids_; }
  /// Internal id for an external id; throws a lookup error if absent.
  VertexId internal_id(std::int64_t external) const;

  /// Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  std::size_t max_degree() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<std::int64_t> external_ids_;
  std::vector<std::pair<std::int64_t, VertexId>> id_index_;
};

/// Reads a whitespace-separated edge list (`#` or `%` comment lines).
/// Self-loops, repeated pairs, and isolated vertices are removed and edge
/// direction is ignored.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(std::istream& in, const std::string& source_name = "<stream>");

/// Writes `u v` lines in external ids, preceded by optional comment lines.
void write_edge_list(const Graph& g, const std::filesystem::path& path,
                     std::span<const std::string> comments = {});

std::size_t degree(const Graph& g, VertexId v);

enum class GeneratorModel { ErdosRenyi, BarabasiAlbert };

struct GeneratorSpec {
  GeneratorModel model = GeneratorModel::ErdosRenyi;
  std::uint64_t target_edges = 10000;
  double density = 2.5;
  std::uint64_t seed = 1;
};

/// G(n, m): exactly `target_edges` edges on round(m / density) vertices.
Graph generate_erdos_renyi(const GeneratorSpec& spec);

/// Preferential attachment grown from a small clique. Each new vertex attaches
/// floor or ceil(density) edges so that m / n tracks `density`.
Graph generate_barabasi_albert(const GeneratorSpec& spec);

Graph generate(const GeneratorSpec& spec);

/// One-line description of the generator parameters actually used.
std::string describe(const GeneratorSpec& spec);

}  // namespace gila
