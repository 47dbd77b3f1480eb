#include "gila/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gila/errors.hpp"

namespace gila {

namespace {

constexpr double kMarginFraction = 0.02;

std::string num(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // Avoid "-0.000".
  if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, 0.0);
  }
  return buf;
}

std::string exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return {buf, end};
}

}  // namespace

std::vector<std::string> RenderOptions::default_palette() {
  return {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
}

void RenderOptions::validate(bool clustered) const {
  if (!(width > 0 && height > 0)) fail(ErrorKind::Config, "render size must be positive");
  if (!(vertex_radius >= 0 && edge_width >= 0)) fail(ErrorKind::Config, "render radii must be non-negative");
  if (clustered && palette.empty()) fail(ErrorKind::Config, "palette is empty");
}

std::vector<Vec2> coords_for(const Graph& g, const Layout& layout) {
  if (layout.ids.size() != layout.coords.size()) fail(ErrorKind::Mismatch, "layout ids and coordinates differ in length");
  std::unordered_map<std::int64_t, std::size_t> at;
  at.reserve(layout.ids.size());
  for (std::size_t i = 0; i < layout.ids.size(); ++i) at.emplace(layout.ids[i], i);
  std::vector<Vec2> out(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto it = at.find(g.external_id(v));
    if (it == at.end()) fail(ErrorKind::Lookup, "no coordinate for vertex " + std::to_string(g.external_id(v)));
    out[v] = layout.coords[it->second];
  }
  if (layout.ids.size() != g.vertex_count())
    fail(ErrorKind::Mismatch, "layout has " + std::to_string(layout.ids.size()) + " vertices, graph has " +
                                  std::to_string(g.vertex_count()));
  return out;
}

std::string to_svg(const Layout& layout, const Graph& g, const ClusterAssignment* clusters,
                   const RenderOptions& opts) {
  if (layout.size() == 0) fail(ErrorKind::InvalidArgument, "cannot render an empty layout");
  opts.validate(clusters != nullptr);
  const auto pos = coords_for(g, layout);
  if (clusters && clusters->cluster.size() != pos.size())
    fail(ErrorKind::Mismatch, "cluster assignment does not cover the layout");

  BoundingBox box;
  for (const auto& p : pos) box.add(p);
  const double mx = opts.width * kMarginFraction;
  const double my = opts.height * kMarginFraction;
  const double aw = opts.width - 2 * mx;
  const double ah = opts.height - 2 * my;
  double scale = 1.0;
  if (box.width() > 0 || box.height() > 0) {
    scale = std::min(box.width() > 0 ? aw / box.width() : INFINITY, box.height() > 0 ? ah / box.height() : INFINITY);
  }
  const double ox = mx + (aw - box.width() * scale) / 2 - box.min.x * scale;
  const double oy = my + (ah - box.height() * scale) / 2 - box.min.y * scale;
  auto X = [&](const Vec2& p) { return num(p.x * scale + ox, 3); };
  auto Y = [&](const Vec2& p) { return num(p.y * scale + oy, 3); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(opts.width, 0)
     << "\" height=\"" << num(opts.height, 0) << "\" viewBox=\"0 0 " << num(opts.width, 3) << ' '
     << num(opts.height, 3) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (opts.draw_edges) {
    os << "<g stroke=\"#9a9a9a\" stroke-width=\"" << num(opts.edge_width, 3) << "\" stroke-opacity=\"0.7\">\n";
    for (auto [u, v] : g.edges())
      os << "<line x1=\"" << X(pos[u]) << "\" y1=\"" << Y(pos[u]) << "\" x2=\"" << X(pos[v]) << "\" y2=\""
         << Y(pos[v]) << "\"/>\n";
    os << "</g>\n";
  }
  os << "<g stroke=\"none\">\n";
  const std::string r = num(opts.vertex_radius, 3);
  for (VertexId v = 0; v < pos.size(); ++v) {
    const std::string& fill =
        clusters ? opts.palette[clusters->cluster[v] % opts.palette.size()] : std::string("#1f3b73");
    os << "<circle cx=\"" << X(pos[v]) << "\" cy=\"" << Y(pos[v]) << "\" r=\"" << r << "\" fill=\"" << fill
       << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string format_coords(const Layout& layout) {
  if (layout.size() == 0) fail(ErrorKind::InvalidArgument, "cannot write an empty layout");
  if (layout.ids.size() != layout.coords.size()) fail(ErrorKind::Mismatch, "layout ids and coordinates differ in length");
  const auto& f = layout.meta.force;
  const auto& s = layout.meta.spinner;
  const auto& m = layout.meta;
  std::ostringstream os;
  os << "% gila layout\n"
     << "% mode=" << to_string(f.mode) << '\n'
     << "% k=" << f.k << '\n'
     << "% p=" << f.p << '\n'
     << "% q=" << f.q << '\n'
     << "% ns=" << exact(f.ns) << '\n'
     << "% nh=" << exact(f.nh) << '\n'
     << "% nw=" << exact(f.nw) << '\n'
     << "% frame_width=" << exact(f.frame_width) << '\n'
     << "% frame_height=" << exact(f.frame_height) << '\n'
     << "% cool_base=" << exact(f.cool_base) << '\n'
     << "% conv_threshold=" << exact(f.conv_threshold) << '\n'
     << "% conv_fraction=" << exact(f.conv_fraction) << '\n'
     << "% max_iterations=" << f.max_iterations << '\n'
     << "% seed=" << f.seed << '\n'
     << "% rho=" << exact(f.rho) << '\n'
     << "% partitions=" << s.num_partitions << '\n'
     << "% capacity_factor=" << exact(s.capacity_factor) << '\n'
     << "% partition_max_iterations=" << s.max_iterations << '\n'
     << "% partition_seed=" << s.seed << '\n'
     << "% workers=" << m.workers << '\n'
     << "% iterations=" << m.iterations << '\n'
     << "% supersteps=" << m.supersteps << '\n'
     << "% converged=" << (m.converged ? 1 : 0) << '\n'
     << "% vertices=" << layout.size() << '\n';
  for (std::size_t i = 0; i < layout.size(); ++i)
    os << layout.ids[i] << ' ' << num(layout.coords[i].x, 6) << ' ' << num(layout.coords[i].y, 6) << '\n';
  return os.str();
}

void write_coords(const Layout& layout, const std::filesystem::path& path) {
  const auto text = format_coords(layout);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

Layout parse_coords(std::istream& in, const std::string& source_name) {
  Layout layout;
  std::map<std::string, std::string> header;
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::Parse, source_name + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '%' || line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      header[key] = line.substr(eq + 1);
      continue;
    }
    std::istringstream ls(line);
    std::int64_t id;
    double x, y;
    if (!(ls >> id >> x >> y)) bad("expected '<id> <x> <y>'");
    if (!std::isfinite(x) || !std::isfinite(y)) bad("non-finite coordinate");
    layout.ids.push_back(id);
    layout.coords.push_back({x, y});
  }
  if (layout.ids.empty()) fail(ErrorKind::EmptyGraph, source_name + ": no coordinates");

  auto& f = layout.meta.force;
  auto& s = layout.meta.spinner;
  auto& m = layout.meta;
  auto get = [&](const char* key, auto& field) {
    auto it = header.find(key);
    if (it == header.end()) return;
    std::istringstream vs(it->second);
    std::remove_reference_t<decltype(field)> v{};
    if (!(vs >> v)) fail(ErrorKind::Parse, source_name + ": bad header value for " + key);
    field = v;
  };
  if (auto it = header.find("mode"); it != header.end()) f.mode = parse_force_mode(it->second);
  get("k", f.k);
  get("p", f.p);
  get("q", f.q);
  get("ns", f.ns);
  get("nh", f.nh);
  get("nw", f.nw);
  get("frame_width", f.frame_width);
  get("frame_height", f.frame_height);
  get("cool_base", f.cool_base);
  get("conv_threshold", f.conv_threshold);
  get("conv_fraction", f.conv_fraction);
  get("max_iterations", f.max_iterations);
  get("seed", f.seed);
  get("rho", f.rho);
  get("partitions", s.num_partitions);
  get("capacity_factor", s.capacity_factor);
  get("partition_max_iterations", s.max_iterations);
  get("partition_seed", s.seed);
  get("workers", m.workers);
  get("iterations", m.iterations);
  get("supersteps", m.supersteps);
  get("converged", m.converged);
  return layout;
}

Layout read_coords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return parse_coords(in, path.string());
}

}  // namespace gila
