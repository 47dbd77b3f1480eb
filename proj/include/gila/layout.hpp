#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gila/bsp.hpp"
#include "gila/geometry.hpp"
#include "gila/graph.hpp"
#include "gila/partition.hpp"

namespace gila {

enum class ForceMode { FR, LinLog };

const char* to_string(ForceMode mode) noexcept;
ForceMode parse_force_mode(std::string_view text);

/// Tunable constants of the force model and of the iteration schedule.
struct ForceConfig {
  /// TTL of position messages: repulsion is computed inside the k-hop ball.
  std::uint32_t k = 2;
  /// Attraction is delta^p / d, repulsion d^2 / delta^q.
  int p = 2;
  int q = 1;
  double ns = 20.0;
  double nh = 20.0;
  double nw = 20.0;
  double frame_width = 1200.0;
  double frame_height = 1200.0;
  double cool_base = 0.93;
  double conv_threshold = 0.01;
  double conv_fraction = 0.15;
  ForceMode mode = ForceMode::FR;
  std::uint32_t max_iterations = 200;
  std::uint64_t seed = 1;
  /// Satellite circle radius as a fraction of the anchor's shortest edge.
  double rho = 0.2;

  /// Ideal edge length d = ns + sqrt(nh^2 + nw^2).
  double ideal_distance() const noexcept;
  /// Throws a config error for out-of-range values.
  void validate() const;
  /// Switches mode and the attraction exponent together (FR: p=2, LinLog: p=0).
  void set_mode(ForceMode m) noexcept;
};

double attractive_force(double delta, const ForceConfig& cfg);
/// weight * d^2 / delta^q; delta below 1e-9 is treated as 1e-9.
double repulsive_force(double delta, std::uint32_t weight, const ForceConfig& cfg);
inline constexpr double kMinDistance = 1e-9;

/// Maximum displacement at iteration h for a component of n vertices whose
/// initial drawing has aspect ratio a (height / width).
double cooling(std::uint64_t h, std::size_t n, double aspect, const ForceConfig& cfg);

/// True when fewer than conv_fraction of the entries exceed conv_threshold.
bool halt_check(std::span<const double> displacements, const ForceConfig& cfg);

/// Component label per vertex: the smallest vertex id reachable. Runs as a
/// min-label flooding vertex program.
struct ComponentResult {
  std::vector<VertexId> label;
  std::uint64_t supersteps = 0;
};
ComponentResult connected_components(const Graph& g, const bsp::RunConfig& run = {});

/// Single pass removal of degree-one vertices. A degree-one vertex whose only
/// neighbor is also degree-one (an isolated edge) is kept.
struct PruneResult {
  Graph pruned;
  /// pruned id -> id in the input graph
  std::vector<VertexId> to_original;
  /// input id -> pruned id, or bsp::kNoVertex when removed
  std::vector<VertexId> to_pruned;
  /// input id -> removed degree-one neighbors (ascending)
  std::vector<std::vector<VertexId>> attach;
  /// pruned id -> number of removed neighbors
  std::vector<std::uint32_t> deg1_count;
};
PruneResult prune_degree_one(const Graph& g, const bsp::RunConfig& run = {});

struct LayoutVertexState {
  Vec2 pos;
  Vec2 disp;
  /// Senders whose position was processed this iteration, sorted.
  std::vector<VertexId> seen;
  std::uint32_t deg1_count = 0;
  VertexId component = 0;
  std::uint32_t component_size = 1;
  double aspect = 1.0;
  double last_move = 0.0;
  /// LinLog only: sum of unit vectors toward neighbours and the repulsion
  /// weight gathered this iteration.
  Vec2 pull;
  std::uint32_t pulled = 0;
  double ball_weight = 0.0;
};

/// The flooded position record.
struct PositionMessage {
  double x;
  double y;
  VertexId sender;
  std::uint32_t ttl;
  std::uint32_t deg1_weight;
  std::uint32_t reserved;
};
static_assert(sizeof(PositionMessage) == 32);

/// Builds per-vertex states from positions and component labels. Component
/// sizes and aspect ratios (bounding box padded by d on each axis) are
/// computed here and stay fixed for the run.
std::vector<LayoutVertexState> make_layout_states(std::span<const Vec2> positions,
                                                  std::span<const std::uint32_t> deg1_count,
                                                  std::span<const VertexId> component,
                                                  const ForceConfig& cfg);

/// Uniform random point in the frame, a pure function of (seed, key).
Vec2 initial_position(std::uint64_t seed, std::uint64_t key, const ForceConfig& cfg);

/// Factor applied around the frame centre to the random start of a component
/// with `component_size` vertices: the frame shrinks to an area of about
/// component_size * d^2 when that is smaller, so that small components can
/// reach equilibrium within their cooling schedule.
double placement_scale(std::size_t component_size, const ForceConfig& cfg);

struct LayoutRunInfo {
  std::uint64_t iterations = 0;
  std::uint64_t supersteps = 0;
  bool converged = false;
  bsp::RunResult engine;
};

/// Engine supersteps per drawing iteration: broadcast, k relay steps, move.
inline std::uint64_t supersteps_per_iteration(const ForceConfig& cfg) { return cfg.k + 2; }

/// Default per-superstep message cap for the flooding program. It grows with
/// the mean degree for k > 2 since relayed traffic scales with ball size.
std::uint64_t layout_message_cap(const Graph& g, const ForceConfig& cfg);

/// Runs up to `budget` drawing iterations numbered from `first_iteration`,
/// stopping early on the displacement halting rule.
LayoutRunInfo run_layout(const Graph& g, std::vector<LayoutVertexState>& states,
                         const ForceConfig& cfg, std::span<const std::uint32_t> assignment,
                         const bsp::RunConfig& run, std::uint64_t first_iteration,
                         std::uint64_t budget);

/// Exactly one drawing iteration with cooling index h. Afterwards each
/// state's `seen` holds the senders processed during the iteration.
LayoutRunInfo layout_iteration(const Graph& g, std::vector<LayoutVertexState>& states,
                               const ForceConfig& cfg, std::span<const std::uint32_t> assignment,
                               const bsp::RunConfig& run, std::uint64_t h);

/// Places removed degree-one vertices on a circle around their anchor.
/// `pruned_pos` is indexed by pruned id; the result by input-graph id.
std::vector<Vec2> reinsert_degree_one(const PruneResult& prune, std::span<const Vec2> pruned_pos,
                                      double rho, double fallback_edge_length);

/// Translates each component onto a grid of ceil(sqrt(C)) columns, largest
/// bounding box first, with cells of (max box + margin).
std::vector<Vec2> pack_components(std::span<const Vec2> pos, std::span<const VertexId> component,
                                  double margin);

struct LayoutMeta {
  ForceConfig force;
  SpinnerConfig spinner;
  std::uint32_t workers = 1;
  std::uint64_t iterations = 0;
  std::uint64_t supersteps = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t peak_messages = 0;
  std::uint64_t message_cap = 0;
  bool converged = false;
};

/// A drawing: coordinates indexed by internal vertex id plus the external ids
/// they are reported under.
struct Layout {
  std::vector<std::int64_t> ids;
  std::vector<Vec2> coords;
  LayoutMeta meta;

  std::size_t size() const noexcept { return coords.size(); }
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineResult {
  Layout layout;
  std::vector<StageTiming> timings;
  std::uint32_t partition_iterations = 0;
  std::size_t partition_edge_cut = 0;
};

/// Components, pruning, partitioning, random placement, iterated layout,
/// reinsertion and packing, in that order.
PipelineResult run_pipeline(const Graph& g, const ForceConfig& cfg, const bsp::RunConfig& run,
                            const SpinnerConfig& part);

}  // namespace gila
