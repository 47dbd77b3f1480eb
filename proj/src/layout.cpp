#include "gila/layout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "gila/errors.hpp"
#include "gila/random.hpp"

namespace gila {

// ---------------------------------------------------------------------------
// Connected components: min-label flooding.

namespace {

struct LabelState {
  VertexId label = 0;
};
struct LabelMessage {
  VertexId label;
};

struct MinLabelFlooding {
  using State = LabelState;
  using Message = LabelMessage;

  void compute(bsp::Context<Message>& ctx, State& s,
               std::span<const bsp::Envelope<Message>> inbox) const {
    ctx.vote_to_halt();
    if (ctx.superstep() == 0) {
      s.label = ctx.vertex();
      ctx.send_to_neighbors({s.label});
      return;
    }
    VertexId best = s.label;
    for (const auto& e : inbox) best = std::min(best, e.payload.label);
    if (best >= s.label) return;
    s.label = best;
    // Neighbors that sent the new minimum already hold it. The inbox is
    // ordered by source, as is the neighbor list.
    auto it = inbox.begin();
    for (VertexId u : ctx.neighbors()) {
      bool knows = false;
      while (it != inbox.end() && it->source < u) ++it;
      for (auto j = it; j != inbox.end() && j->source == u; ++j)
        if (j->payload.label == best) knows = true;
      if (!knows) ctx.send(u, {best});
    }
  }
};

// Pruning: leaves announce themselves; an anchor counts its leaves.
struct LeafState {
  bool remove = false;
  std::uint32_t leaves = 0;
};
struct LeafMessage {
  std::uint32_t marker;
};

struct LeafDetection {
  using State = LeafState;
  using Message = LeafMessage;

  void compute(bsp::Context<Message>& ctx, State& s,
               std::span<const bsp::Envelope<Message>> inbox) const {
    if (ctx.superstep() == 0) {
      if (ctx.neighbors().size() == 1) ctx.send_to_neighbors({1});
      return;
    }
    ctx.vote_to_halt();
    if (ctx.neighbors().size() == 1) {
      // An isolated edge: both endpoints are leaves and both are kept.
      s.remove = inbox.empty();
      s.leaves = 0;
    } else {
      s.leaves = static_cast<std::uint32_t>(inbox.size());
    }
  }
};

}  // namespace

ComponentResult connected_components(const Graph& g, const bsp::RunConfig& run) {
  std::vector<LabelState> states(g.vertex_count());
  bsp::Aggregators aggs;
  bsp::RunConfig cfg = run;
  cfg.max_supersteps = std::max<std::uint64_t>(g.vertex_count() + 2, 2);
  const auto assignment = bsp::round_robin_assignment(g.vertex_count(), cfg.workers);
  const auto result = bsp::run(g, MinLabelFlooding{}, states, assignment, cfg, aggs);
  ComponentResult out;
  out.supersteps = result.supersteps;
  out.label.reserve(states.size());
  for (const auto& s : states) out.label.push_back(s.label);
  return out;
}

PruneResult prune_degree_one(const Graph& g, const bsp::RunConfig& run) {
  const std::size_t n = g.vertex_count();
  std::vector<LeafState> states(n);
  bsp::Aggregators aggs;
  bsp::RunConfig cfg = run;
  cfg.max_supersteps = 2;
  const auto assignment = bsp::round_robin_assignment(n, cfg.workers);
  bsp::run(g, LeafDetection{}, states, assignment, cfg, aggs);

  PruneResult out;
  out.to_pruned.assign(n, bsp::kNoVertex);
  out.attach.resize(n);
  std::vector<std::int64_t> ids;
  for (VertexId v = 0; v < n; ++v) {
    if (states[v].remove) {
      out.attach[g.neighbors(v)[0]].push_back(v);
      continue;
    }
    out.to_pruned[v] = static_cast<VertexId>(out.to_original.size());
    out.to_original.push_back(v);
    out.deg1_count.push_back(states[v].leaves);
    ids.push_back(g.external_id(v));
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (auto [u, v] : g.edges())
    if (out.to_pruned[u] != bsp::kNoVertex && out.to_pruned[v] != bsp::kNoVertex)
      edges.emplace_back(out.to_pruned[u], out.to_pruned[v]);
  out.pruned = Graph::from_edges(out.to_original.size(), edges, std::move(ids));
  return out;
}

// ---------------------------------------------------------------------------
// Layout states and placement.

Vec2 initial_position(std::uint64_t seed, std::uint64_t key, const ForceConfig& cfg) {
  const std::uint64_t h = hash_combine(seed, key);
  return {to_unit(mix64(h ^ 0x78ULL)) * cfg.frame_width, to_unit(mix64(h ^ 0x79ULL)) * cfg.frame_height};
}

std::vector<LayoutVertexState> make_layout_states(std::span<const Vec2> positions,
                                                  std::span<const std::uint32_t> deg1_count,
                                                  std::span<const VertexId> component,
                                                  const ForceConfig& cfg) {
  const std::size_t n = positions.size();
  if (deg1_count.size() != n || component.size() != n)
    fail(ErrorKind::InvalidArgument, "layout state inputs differ in length");
  std::map<VertexId, std::pair<std::uint32_t, BoundingBox>> groups;
  for (std::size_t v = 0; v < n; ++v) {
    auto& [count, box] = groups[component[v]];
    ++count;
    box.add(positions[v]);
  }
  const double d = cfg.ideal_distance();
  std::vector<LayoutVertexState> states(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& [count, box] = groups[component[v]];
    auto& s = states[v];
    s.pos = positions[v];
    s.deg1_count = deg1_count[v];
    s.component = component[v];
    s.component_size = count;
    s.aspect = (box.height() + d) / (box.width() + d);
  }
  return states;
}

double placement_scale(std::size_t component_size, const ForceConfig& cfg) {
  const double side = std::sqrt(static_cast<double>(component_size)) * cfg.ideal_distance();
  return std::min(1.0, side / std::sqrt(cfg.frame_width * cfg.frame_height));
}

std::uint64_t layout_message_cap(const Graph& g, const ForceConfig& cfg) {
  const std::uint64_t base = bsp::default_message_cap(g);
  if (cfg.k <= 2 || g.vertex_count() == 0) return base;
  const double mean_degree = 2.0 * static_cast<double>(g.edge_count()) / g.vertex_count();
  const double growth = std::max(1.0, std::ceil(mean_degree));
  return static_cast<std::uint64_t>(static_cast<double>(base) * std::pow(growth, cfg.k - 2));
}

// ---------------------------------------------------------------------------
// The flooding force program.

namespace {

struct FloodingLayout {
  using State = LayoutVertexState;
  using Message = PositionMessage;

  ForceConfig cfg;
  double d;
  std::uint64_t first_iteration;
  std::uint64_t budget;
  bsp::AggregatorId moved_id;
  bsp::AggregatorId active_id;

  std::uint64_t period() const { return cfg.k + 2; }

  void compute(bsp::Context<Message>& ctx, State& s,
               std::span<const bsp::Envelope<Message>> inbox) const {
    const std::uint64_t step = ctx.superstep();
    const std::uint64_t iteration = step / period();
    const std::uint64_t phase = step % period();
    if (phase == 0) {
      begin_iteration(ctx, s, iteration);
    } else if (phase <= cfg.k) {
      relay(ctx, s, inbox, phase, first_iteration + iteration);
    } else {
      move(ctx, s, first_iteration + iteration);
    }
  }

  void begin_iteration(bsp::Context<Message>& ctx, State& s, std::uint64_t iteration) const {
    if (iteration > 0) {
      const double moved = ctx.read_aggregate(moved_id);
      const double active = ctx.read_aggregate(active_id);
      if (moved < cfg.conv_fraction * active) {
        ctx.vote_to_halt();
        return;
      }
    }
    if (iteration >= budget) {
      ctx.vote_to_halt();
      return;
    }
    s.seen.clear();
    s.disp = {};
    s.pull = {};
    s.pulled = 0;
    s.ball_weight = 0.0;
    ctx.send_to_neighbors({s.pos.x, s.pos.y, ctx.vertex(), cfg.k, 1 + s.deg1_count, 0});
  }

  void relay(bsp::Context<Message>& ctx, State& s, std::span<const bsp::Envelope<Message>> inbox,
             std::uint64_t phase, std::uint64_t h) const {
    // Inboxes arrive grouped by ascending relay, so the first copy of each
    // sender is the one from its lowest relay. Copies of a sender within an
    // iteration agree on position, weight and TTL.
    thread_local std::vector<std::uint64_t> stamp;
    thread_local std::uint64_t epoch = 0;
    if (stamp.size() < ctx.graph().vertex_count()) stamp.assign(ctx.graph().vertex_count(), 0);
    ++epoch;
    const std::size_t old_seen = s.seen.size();
    for (const auto& e : inbox) {
      const auto& m = e.payload;
      if (m.sender == ctx.vertex() || stamp[m.sender] == epoch) continue;
      stamp[m.sender] = epoch;
      if (std::binary_search(s.seen.begin(), s.seen.begin() + static_cast<std::ptrdiff_t>(old_seen),
                             m.sender))
        continue;
      s.seen.push_back(m.sender);

      Vec2 delta = s.pos - Vec2{m.x, m.y};
      double dist = delta.norm();
      Vec2 dir;
      if (dist < kMinDistance) {
        const double angle = 2.0 * M_PI *
            to_unit(hash_combine(ctx.seed() ^ cfg.seed,
                                 hash_combine(h, (std::uint64_t{ctx.vertex()} << 32) | m.sender)));
        dir = {std::cos(angle), std::sin(angle)};
        dist = kMinDistance;
      } else {
        dir = delta * (1.0 / dist);
      }
      s.disp += dir * repulsive_force(dist, m.deg1_weight, cfg);
      // First relay step carries the direct neighbors.
      s.ball_weight += m.deg1_weight;
      if (phase == 1) {
        if (cfg.mode == ForceMode::LinLog) {
          s.pull -= dir;
          ++s.pulled;
        } else {
          s.disp -= dir * attractive_force(dist, cfg);
        }
      }

      if (m.ttl > cfg.k || m.ttl == 0)
        fail(ErrorKind::ContractViolation, "message TTL out of range at vertex " +
                                               std::to_string(ctx.vertex()));
      const std::uint32_t ttl = m.ttl - 1;
      if (ttl > 0) {
        Message fwd = m;
        fwd.ttl = ttl;
        ctx.send_to_neighbors(fwd, e.source);
      }
    }
    std::sort(s.seen.begin() + static_cast<std::ptrdiff_t>(old_seen), s.seen.end());
    std::inplace_merge(s.seen.begin(), s.seen.begin() + static_cast<std::ptrdiff_t>(old_seen),
                       s.seen.end());
  }

  void move(bsp::Context<Message>& ctx, State& s, std::uint64_t h) const {
    // Constant LinLog attraction, scaled so that a vertex whose whole ball
    // sits at distance d is in balance.
    if (cfg.mode == ForceMode::LinLog && s.pulled > 0)
      s.disp += s.pull * (attractive_force(0.0, cfg) * s.ball_weight / s.pulled);
    if (!s.disp.finite())
      fail(ErrorKind::Numerical, "non-finite force at vertex " + std::to_string(ctx.vertex()) +
                                     " in iteration " + std::to_string(h));
    const double limit = cooling(h, s.component_size, s.aspect, cfg);
    const double len = s.disp.norm();
    Vec2 step = s.disp;
    if (len > limit) step = step * (limit / len);
    s.pos += step;
    s.last_move = step.norm();
    if (!s.pos.finite())
      fail(ErrorKind::Numerical, "non-finite position at vertex " + std::to_string(ctx.vertex()));
    if (s.last_move > cfg.conv_threshold) ctx.aggregate(moved_id, 1.0);
    ctx.aggregate(active_id, 1.0);
  }
};

}  // namespace

LayoutRunInfo run_layout(const Graph& g, std::vector<LayoutVertexState>& states,
                         const ForceConfig& cfg, std::span<const std::uint32_t> assignment,
                         const bsp::RunConfig& run, std::uint64_t first_iteration,
                         std::uint64_t budget) {
  cfg.validate();
  bsp::Aggregators aggs;
  const auto moved_id = aggs.add_sum("displaced");
  const auto active_id = aggs.add_sum("active");
  const FloodingLayout program{cfg, cfg.ideal_distance(), first_iteration, budget, moved_id, active_id};

  bsp::RunConfig engine_cfg = run;
  engine_cfg.max_supersteps = budget * supersteps_per_iteration(cfg) + 1;
  if (engine_cfg.message_cap == 0) engine_cfg.message_cap = layout_message_cap(g, cfg);

  LayoutRunInfo info;
  info.engine = bsp::run(g, program, states, assignment, engine_cfg, aggs);
  info.supersteps = info.engine.supersteps;
  info.iterations = (info.supersteps - 1) / supersteps_per_iteration(cfg);
  info.converged = info.iterations < budget;
  return info;
}

LayoutRunInfo layout_iteration(const Graph& g, std::vector<LayoutVertexState>& states,
                               const ForceConfig& cfg, std::span<const std::uint32_t> assignment,
                               const bsp::RunConfig& run, std::uint64_t h) {
  return run_layout(g, states, cfg, assignment, run, h, 1);
}

// ---------------------------------------------------------------------------
// Pipeline.

namespace {

template <class F>
auto stage(const char* name, std::vector<StageTiming>& timings, F&& body) {
  const auto started = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()});
    } else {
      auto r = body();
      timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()});
      return r;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const Graph& g, const ForceConfig& cfg, const bsp::RunConfig& run,
                            const SpinnerConfig& part) {
  cfg.validate();
  if (g.vertex_count() == 0) fail(ErrorKind::EmptyGraph, "cannot lay out an empty graph");
  PipelineResult out;
  auto& timings = out.timings;

  const ComponentResult comps =
      stage("components", timings, [&] { return connected_components(g, run); });
  const PruneResult prune = stage("pruning", timings, [&] { return prune_degree_one(g, run); });
  const Graph& pg = prune.pruned;
  const std::size_t pn = pg.vertex_count();

  std::vector<std::uint32_t> assignment = stage("partitioning", timings, [&] {
    SpinnerConfig sc = part;
    sc.num_partitions = std::clamp<std::uint32_t>(sc.num_partitions, 1, static_cast<std::uint32_t>(pn));
    const PartitionLabeling labeling = spinner_partition(pg, sc, run);
    out.partition_iterations = labeling.iterations;
    out.partition_edge_cut = edge_cut(pg, labeling.label);
    std::vector<std::uint32_t> a(pn);
    for (std::size_t v = 0; v < pn; ++v) a[v] = labeling.label[v] % run.workers;
    return a;
  });

  std::vector<LayoutVertexState> states = stage("placement", timings, [&] {
    std::vector<Vec2> pos(pn);
    std::vector<VertexId> comp(pn);
    std::map<VertexId, std::size_t> comp_size;
    for (VertexId v = 0; v < pn; ++v) {
      comp[v] = comps.label[prune.to_original[v]];
      ++comp_size[comp[v]];
    }
    const Vec2 centre{cfg.frame_width / 2, cfg.frame_height / 2};
    for (VertexId v = 0; v < pn; ++v) {
      const double s = placement_scale(comp_size[comp[v]], cfg);
      pos[v] = centre + (initial_position(cfg.seed, prune.to_original[v], cfg) - centre) * s;
    }
    return make_layout_states(pos, prune.deg1_count, comp, cfg);
  });

  const LayoutRunInfo info = stage("layout", timings, [&] {
    return run_layout(pg, states, cfg, assignment, run, 0, cfg.max_iterations);
  });

  std::vector<Vec2> full = stage("reinsertion", timings, [&] {
    std::vector<Vec2> pos(pn);
    for (std::size_t v = 0; v < pn; ++v) pos[v] = states[v].pos;
    return reinsert_degree_one(prune, pos, cfg.rho, cfg.ideal_distance());
  });

  out.layout.coords = stage("packing", timings, [&] {
    return pack_components(full, comps.label, cfg.ideal_distance());
  });
  out.layout.ids.assign(g.external_ids().begin(), g.external_ids().end());

  auto& meta = out.layout.meta;
  meta.force = cfg;
  meta.spinner = part;
  meta.workers = run.workers;
  meta.iterations = info.iterations;
  meta.supersteps = comps.supersteps + 2 + 2 * std::uint64_t{out.partition_iterations} + info.supersteps;
  meta.total_messages = info.engine.total_messages;
  meta.peak_messages = info.engine.peak_messages;
  meta.message_cap = info.engine.message_cap;
  meta.converged = info.converged;
  return out;
}

}  // namespace gila
