#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gila/clustering.hpp"
#include "gila/graph.hpp"
#include "gila/layout.hpp"

namespace gila {

struct RenderOptions {
  double vertex_radius = 2.5;
  double edge_width = 0.6;
  double width = 1000.0;
  double height = 1000.0;
  std::vector<std::string> palette = default_palette();
  bool draw_edges = true;

  static std::vector<std::string> default_palette();
  void validate(bool clustered) const;
};

/// SVG 1.1 document. The drawing is scaled uniformly and centred so that all
/// vertex centres fall inside the viewport less a 2% margin per side.
/// Vertices are drawn after edges; cluster c uses palette[c % size].
std::string to_svg(const Layout& layout, const Graph& g, const ClusterAssignment* clusters,
                   const RenderOptions& opts);

/// Coordinate file: `%` header lines with the force, partition and run
/// settings, then `<external id> <x> <y>` per vertex with 6 decimals.
void write_coords(const Layout& layout, const std::filesystem::path& path);
std::string format_coords(const Layout& layout);

/// Parses a coordinate file. Header keys that are present are restored into
/// `meta`; unknown keys are ignored.
Layout read_coords(const std::filesystem::path& path);
Layout parse_coords(std::istream& in, const std::string& source_name = "<stream>");

/// Coordinates reordered to the graph's internal ids. Throws a lookup error
/// naming the first vertex without a coordinate.
std::vector<Vec2> coords_for(const Graph& g, const Layout& layout);

}  // namespace gila
