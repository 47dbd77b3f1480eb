#include "gila/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gila/errors.hpp"

namespace gila {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges,
                        std::vector<std::int64_t> external_ids) {
  if (!external_ids.empty() && external_ids.size() != n)
    fail(ErrorKind::InvalidArgument, "external id table size does not match vertex count");

  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n)
      fail(ErrorKind::InvalidArgument,
           "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& a : arcs) ++g.offsets_[a.first + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.reserve(arcs.size());
  for (const auto& a : arcs) g.adjacency_.push_back(a.second);

  if (external_ids.empty()) {
    external_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) external_ids[i] = static_cast<std::int64_t>(i);
  }
  g.external_ids_ = std::move(external_ids);
  g.id_index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    g.id_index_.emplace_back(g.external_ids_[i], static_cast<VertexId>(i));
  std::sort(g.id_index_.begin(), g.id_index_.end());
  for (std::size_t i = 1; i < g.id_index_.size(); ++i)
    if (g.id_index_[i].first == g.id_index_[i - 1].first)
      fail(ErrorKind::InvalidArgument,
           "duplicate external id " + std::to_string(g.id_index_[i].first));
  return g;
}

std::size_t Graph::degree(VertexId v) const {
  if (!contains(v)) fail(ErrorKind::Lookup, "unknown vertex " + std::to_string(v));
  return offsets_[v + 1] - offsets_[v];
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (!contains(u) || !contains(v)) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

VertexId Graph::internal_id(std::int64_t external) const {
  auto it = std::lower_bound(id_index_.begin(), id_index_.end(),
                             std::pair<std::int64_t, VertexId>{external, 0});
  if (it == id_index_.end() || it->first != external)
    fail(ErrorKind::Lookup, "unknown vertex id " + std::to_string(external));
  return it->second;
}

std::vector<std::pair<VertexId, VertexId>> Graph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < vertex_count(); ++u)
    for (VertexId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (VertexId v = 0; v < vertex_count(); ++v) best = std::max(best, offsets_[v + 1] - offsets_[v]);
  return best;
}

std::size_t degree(const Graph& g, VertexId v) { return g.degree(v); }

namespace {

bool parse_int(std::string_view token, std::int64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

Graph parse_edge_list(std::istream& in, const std::string& source_name) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '#' || tokens[0].front() == '%') continue;
    std::int64_t a = 0;
    std::int64_t b = 0;
    // Extra columns (weights, matrix values) are ignored.
    if (tokens.size() < 2 || !parse_int(tokens[0], a) || !parse_int(tokens[1], b))
      fail(ErrorKind::Parse,
           source_name + ":" + std::to_string(line_no) + ": expected two integer vertex ids");
    if (a == b) continue;
    raw.emplace_back(std::min(a, b), std::max(a, b));
  }
  if (raw.empty()) fail(ErrorKind::EmptyGraph, source_name + ": graph is empty after cleaning");

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index_of = [&](std::int64_t x) {
    return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.emplace_back(index_of(a), index_of(b));
  const std::size_t n = ids.size();
  return Graph::from_edges(n, edges, std::move(ids));
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return parse_edge_list(in, path.string());
}

void write_edge_list(const Graph& g, const std::filesystem::path& path,
                     std::span<const std::string> comments) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  for (auto [u, v] : g.edges()) out << g.external_id(u) << ' ' << g.external_id(v) << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gila
