#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "gila/errors.hpp"
#include "gila/graph.hpp"
#include "gila/random.hpp"

namespace gila {

namespace {

std::size_t vertex_target(const GeneratorSpec& spec) {
  if (spec.target_edges == 0) fail(ErrorKind::Config, "target edge count must be positive");
  if (!(spec.density >= 2.0 && spec.density <= 3.0))
    fail(ErrorKind::Config, "density must lie in [2,3], got " + std::to_string(spec.density));
  return static_cast<std::size_t>(std::llround(static_cast<double>(spec.target_edges) / spec.density));
}

void check_feasible(std::size_t n, std::uint64_t m) {
  const double max_edges = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  if (static_cast<double>(m) > max_edges)
    fail(ErrorKind::Infeasible, std::to_string(m) + " edges do not fit a simple graph on " +
                                    std::to_string(n) + " vertices");
}

struct BaPlan {
  std::size_t n = 0;
  std::size_t clique = 0;
  std::uint64_t remaining = 0;
};

BaPlan plan_barabasi_albert(const GeneratorSpec& spec) {
  BaPlan p;
  p.n = vertex_target(spec);
  p.clique = static_cast<std::size_t>(std::ceil(spec.density)) + 1;
  check_feasible(p.n, spec.target_edges);
  const std::uint64_t clique_edges = p.clique * (p.clique - 1) / 2;
  if (p.n <= p.clique || spec.target_edges < clique_edges)
    fail(ErrorKind::Infeasible, "too few vertices or edges for a preferential-attachment graph");
  p.remaining = spec.target_edges - clique_edges;
  return p;
}

}  // namespace

Graph generate_erdos_renyi(const GeneratorSpec& spec) {
  if (spec.model != GeneratorModel::ErdosRenyi)
    fail(ErrorKind::Config, "generator spec is not Erdos-Renyi");
  const std::size_t n = vertex_target(spec);
  check_feasible(n, spec.target_edges);

  SplitMix rng(hash_combine(spec.seed, 0x45524552ULL));
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(spec.target_edges * 2);
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(spec.target_edges);
  while (edges.size() < spec.target_edges) {
    auto u = static_cast<VertexId>(rng.below(n));
    auto v = static_cast<VertexId>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (taken.insert(static_cast<std::uint64_t>(u) * n + v).second) edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

Graph generate_barabasi_albert(const GeneratorSpec& spec) {
  if (spec.model != GeneratorModel::BarabasiAlbert)
    fail(ErrorKind::Config, "generator spec is not Barabasi-Albert");
  const BaPlan plan = plan_barabasi_albert(spec);
  const std::size_t n = plan.n;
  SplitMix rng(hash_combine(spec.seed, 0x42414241ULL));

  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(spec.target_edges);
  // Every edge contributes both endpoints, so a uniform pick from this list
  // is a degree-proportional pick over vertices.
  std::vector<VertexId> endpoints;
  endpoints.reserve(2 * spec.target_edges);
  for (VertexId u = 0; u < plan.clique; ++u)
    for (VertexId v = u + 1; v < plan.clique; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  const std::uint64_t newcomers = n - plan.clique;
  std::vector<VertexId> chosen;
  for (std::uint64_t j = 0; j < newcomers; ++j) {
    const auto v = static_cast<VertexId>(plan.clique + j);
    // Spread the remaining edges evenly: each newcomer gets floor or ceil.
    std::uint64_t want = (j + 1) * plan.remaining / newcomers - j * plan.remaining / newcomers;
    want = std::min<std::uint64_t>(want, v);
    chosen.clear();
    while (chosen.size() < want) {
      const VertexId t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (VertexId t : chosen) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph generate(const GeneratorSpec& spec) {
  return spec.model == GeneratorModel::ErdosRenyi ? generate_erdos_renyi(spec)
                                                  : generate_barabasi_albert(spec);
}

std::string describe(const GeneratorSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  if (spec.model == GeneratorModel::ErdosRenyi) {
    os << "generator=erdos-renyi edges=" << spec.target_edges << " density=" << spec.density
       << " seed=" << spec.seed << " vertices=" << vertex_target(spec);
  } else {
    const BaPlan p = plan_barabasi_albert(spec);
    const double per_vertex =
        static_cast<double>(p.remaining) / static_cast<double>(p.n - p.clique);
    os << "generator=barabasi-albert edges=" << spec.target_edges << " density=" << spec.density
       << " seed=" << spec.seed << " vertices=" << p.n << " seed_clique=" << p.clique
       << " attachment_mean=" << per_vertex << " attachment_min="
       << static_cast<std::uint64_t>(std::floor(per_vertex))
       << " attachment_max=" << static_cast<std::uint64_t>(std::ceil(per_vertex));
  }
  return os.str();
}

}  // namespace gila
