#include <algorithm>
#include <cmath>
#include <map>

#include "gila/errors.hpp"
#include "gila/layout.hpp"

namespace gila {

namespace {

// Offset in [0, period) farthest from every direction in `angles` once all
// angles are folded modulo `period`: the midpoint of the widest circular gap.
double widest_gap_offset(std::vector<double> angles, double period) {
  if (angles.empty()) return 0.0;
  for (double& a : angles) {
    a = std::fmod(a, period);
    if (a < 0) a += period;
  }
  std::sort(angles.begin(), angles.end());
  double best_gap = -1.0;
  double best_mid = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double from = angles[i];
    const double to = i + 1 < angles.size() ? angles[i + 1] : angles[0] + period;
    if (to - from > best_gap) {
      best_gap = to - from;
      best_mid = from + 0.5 * (to - from);
    }
  }
  return std::fmod(best_mid, period);
}

}  // namespace

std::vector<Vec2> reinsert_degree_one(const PruneResult& prune, std::span<const Vec2> pruned_pos,
                                      double rho, double fallback_edge_length) {
  const Graph& pg = prune.pruned;
  if (pruned_pos.size() != pg.vertex_count())
    fail(ErrorKind::InvalidArgument, "layout does not cover the pruned graph");
  std::vector<Vec2> out(prune.to_pruned.size());
  for (VertexId pv = 0; pv < pg.vertex_count(); ++pv) out[prune.to_original[pv]] = pruned_pos[pv];

  for (VertexId pv = 0; pv < pg.vertex_count(); ++pv) {
    const VertexId anchor = prune.to_original[pv];
    const auto& satellites = prune.attach[anchor];
    if (satellites.empty()) continue;
    const Vec2 center = pruned_pos[pv];

    double shortest = std::numeric_limits<double>::infinity();
    std::vector<double> directions;
    for (VertexId pu : pg.neighbors(pv)) {
      const Vec2 e = pruned_pos[pu] - center;
      shortest = std::min(shortest, e.norm());
      directions.push_back(std::atan2(e.y, e.x));
    }
    const double radius = rho * (directions.empty() ? fallback_edge_length : shortest);
    const double period = 2.0 * M_PI / static_cast<double>(satellites.size());
    const double offset = widest_gap_offset(std::move(directions), period);
    for (std::size_t i = 0; i < satellites.size(); ++i) {
      const double angle = offset + period * static_cast<double>(i);
      out[satellites[i]] = center + Vec2{radius * std::cos(angle), radius * std::sin(angle)};
    }
  }
  return out;
}

std::vector<Vec2> pack_components(std::span<const Vec2> pos, std::span<const VertexId> component,
                                  double margin) {
  if (pos.size() != component.size())
    fail(ErrorKind::InvalidArgument, "component labels do not cover the layout");
  if (pos.empty()) fail(ErrorKind::InvalidArgument, "nothing to pack");

  std::map<VertexId, BoundingBox> boxes;
  for (std::size_t v = 0; v < pos.size(); ++v) boxes[component[v]].add(pos[v]);

  std::vector<std::pair<VertexId, BoundingBox>> order(boxes.begin(), boxes.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second.area() > b.second.area(); });

  double cell_w = 0.0;
  double cell_h = 0.0;
  for (const auto& [label, box] : order) {
    cell_w = std::max(cell_w, box.width());
    cell_h = std::max(cell_h, box.height());
  }
  cell_w += margin;
  cell_h += margin;
  const auto columns = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(order.size()))));

  std::map<VertexId, Vec2> shift;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [label, box] = order[i];
    const Vec2 corner{static_cast<double>(i % columns) * cell_w,
                      static_cast<double>(i / columns) * cell_h};
    shift[label] = corner - box.min;
  }
  std::vector<Vec2> out(pos.size());
  for (std::size_t v = 0; v < pos.size(); ++v) out[v] = pos[v] + shift[component[v]];
  return out;
}

}  // namespace gila
