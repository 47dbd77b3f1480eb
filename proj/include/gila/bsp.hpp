#pragma once

// Vertex-centric bulk-synchronous engine with Pregel/Giraph semantics.
//
// A run is a sequence of supersteps. In superstep s every active vertex runs
// the program's compute() over the messages sent to it during s-1; messages
// it sends are delivered at s+1. Vertices are split among `workers` threads
// according to a caller-supplied assignment; a vertex's state is touched only
// by its owning worker. Results never depend on the worker count: inboxes are
// presented grouped by ascending source vertex, each source's messages in the
// order it sent them, and aggregator folds are published only at the barrier.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <exception>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <vector>

#include "gila/errors.hpp"
#include "gila/graph.hpp"

namespace gila::bsp {

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct RunConfig {
  std::uint32_t workers = 1;
  std::uint64_t max_supersteps = 10000;
  std::uint64_t seed = 0;
  /// Envelopes allowed per superstep; 0 selects 64 * m.
  std::uint64_t message_cap = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Emit one statistics line per superstep to `log` (stderr when null).
  bool verbose = false;
  std::ostream* log = nullptr;
};

struct SuperstepStats {
  std::uint64_t superstep = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t active_vertices = 0;
  double wall_ms = 0.0;
};

struct RunResult {
  std::uint64_t supersteps = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t peak_messages = 0;
  std::uint64_t message_cap = 0;
  std::vector<SuperstepStats> stats;
};

std::uint64_t default_message_cap(const Graph& g);

using AggregatorId = std::size_t;

/// Named global folds. Contributions made during superstep s become readable
/// at s+1; with no contributions the published value is the identity.
class Aggregators {
 public:
  using Combine = std::function<double(double, double)>;

  AggregatorId add(std::string name, double identity, Combine combine);
  AggregatorId add_sum(std::string name) { return add(std::move(name), 0.0, std::plus<>{}); }
  AggregatorId add_max(std::string name);
  AggregatorId add_min(std::string name);

  AggregatorId id(std::string_view name) const;
  double read(AggregatorId id) const;
  double read(std::string_view name) const { return read(id(name)); }
  std::size_t size() const noexcept { return slots_.size(); }

  // Engine side.
  void begin_superstep(std::size_t workers);
  void contribute(std::size_t worker, AggregatorId id, double value);
  void publish();

 private:
  struct Slot {
    std::string name;
    double identity;
    Combine combine;
    double published;
  };
  std::vector<Slot> slots_;
  std::vector<std::vector<double>> partial_;
};

template <class Msg>
struct Envelope {
  VertexId source;
  Msg payload;
};

namespace detail {

template <class Msg>
struct Routed {
  VertexId destination;
  VertexId source;
  Msg payload;
};

void emit_stats(const RunConfig& cfg, const SuperstepStats& s);

}  // namespace detail

/// Per-vertex view handed to compute().
template <class Msg>
class Context {
 public:
  Context(const Graph& g, Aggregators& aggs, std::vector<detail::Routed<Msg>>& outbox,
          std::size_t worker, std::uint64_t superstep, std::uint64_t seed)
      : g_(g), aggs_(aggs), outbox_(outbox), worker_(worker), superstep_(superstep), seed_(seed) {}

  VertexId vertex() const noexcept { return v_; }
  std::uint64_t superstep() const noexcept { return superstep_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Graph& graph() const noexcept { return g_; }
  std::span<const VertexId> neighbors() const { return g_.neighbors(v_); }

  /// Queues a message for delivery next superstep. Only neighbors may be
  /// addressed; anything else is a contract violation.
  void send(VertexId destination, const Msg& payload) {
    if (!g_.has_edge(v_, destination))
      fail(ErrorKind::ContractViolation,
           "vertex " + std::to_string(v_) + " sent to non-neighbor " +
               std::to_string(destination) + " in superstep " + std::to_string(superstep_));
    outbox_.push_back({destination, v_, payload});
  }

  /// Sends to every neighbor except `except`.
  void send_to_neighbors(const Msg& payload, VertexId except = kNoVertex) {
    for (VertexId u : g_.neighbors(v_))
      if (u != except) outbox_.push_back({u, v_, payload});
  }

  void vote_to_halt() noexcept { halt_ = true; }

  void aggregate(AggregatorId id, double value) { aggs_.contribute(worker_, id, value); }
  void aggregate(std::string_view name, double value) { aggs_.contribute(worker_, aggs_.id(name), value); }
  double read_aggregate(AggregatorId id) const { return aggs_.read(id); }
  double read_aggregate(std::string_view name) const { return aggs_.read(name); }

  // Engine side.
  void bind(VertexId v) noexcept {
    v_ = v;
    halt_ = false;
  }
  bool halted() const noexcept { return halt_; }

 private:
  const Graph& g_;
  Aggregators& aggs_;
  std::vector<detail::Routed<Msg>>& outbox_;
  std::size_t worker_;
  std::uint64_t superstep_;
  std::uint64_t seed_;
  VertexId v_ = kNoVertex;
  bool halt_ = false;
};

/// A vertex program provides `State`, a trivially copyable `Message`, and
///   void compute(Context<Message>&, State&, std::span<const Envelope<Message>>) const;
template <class P>
concept VertexProgram = std::is_trivially_copyable_v<typename P::Message> &&
    requires(const P& p, Context<typename P::Message>& ctx, typename P::State& s,
             std::span<const Envelope<typename P::Message>> inbox) {
  p.compute(ctx, s, inbox);
};

/// Runs `program` until every vertex has voted to halt with no message in
/// flight, or until `cfg.max_supersteps` supersteps have executed.
template <VertexProgram Program>
RunResult run(const Graph& g, const Program& program, std::vector<typename Program::State>& states,
              std::span<const std::uint32_t> assignment, const RunConfig& cfg, Aggregators& aggs) {
  using Msg = typename Program::Message;
  const std::size_t n = g.vertex_count();
  if (cfg.workers == 0) fail(ErrorKind::Config, "worker count must be positive");
  if (cfg.max_supersteps == 0) fail(ErrorKind::Config, "max_supersteps must be positive");
  if (states.size() != n) fail(ErrorKind::InvalidArgument, "state vector does not cover the graph");
  if (assignment.size() != n)
    fail(ErrorKind::InvalidArgument, "worker assignment does not cover the graph");

  const std::size_t workers = cfg.workers;
  std::vector<std::vector<VertexId>> owned(workers);
  for (VertexId v = 0; v < n; ++v) {
    if (assignment[v] >= workers)
      fail(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " assigned to worker " +
                                           std::to_string(assignment[v]) + " of " +
                                           std::to_string(workers));
    owned[assignment[v]].push_back(v);
  }

  RunResult result;
  result.message_cap = cfg.message_cap ? cfg.message_cap : default_message_cap(g);

  std::vector<std::uint8_t> halted(n, 0);
  std::vector<std::size_t> inbox_offsets(n + 1, 0);
  std::vector<Envelope<Msg>> inbox;
  std::vector<std::vector<detail::Routed<Msg>>> outboxes(workers);
  std::vector<std::uint64_t> active_counts(workers, 0);
  // Slice of its worker's outbox written by each vertex this superstep.
  std::vector<std::pair<std::size_t, std::size_t>> sent_range(n);
  std::vector<std::exception_ptr> errors(workers);

  for (std::uint64_t step = 0; step < cfg.max_supersteps; ++step) {
    const auto started = std::chrono::steady_clock::now();
    aggs.begin_superstep(workers);
    const std::uint64_t delivered = inbox.size();

    auto work = [&](std::size_t w) {
      try {
        auto& outbox = outboxes[w];
        outbox.clear();
        Context<Msg> ctx(g, aggs, outbox, w, step, cfg.seed);
        std::uint64_t active = 0;
        for (VertexId v : owned[w]) {
          auto* first = inbox.data() + inbox_offsets[v];
          auto* last = inbox.data() + inbox_offsets[v + 1];
          if (halted[v] && first == last) {
            sent_range[v] = {0, 0};
            continue;
          }
          ctx.bind(v);
          const std::size_t before = outbox.size();
          program.compute(ctx, states[v], std::span<const Envelope<Msg>>(first, last));
          sent_range[v] = {before, outbox.size()};
          halted[v] = ctx.halted() ? 1 : 0;
          ++active;
        }
        active_counts[w] = active;
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    // Barrier: publish aggregators and route envelopes into next inboxes.
    aggs.publish();
    std::uint64_t sent = 0;
    for (const auto& ob : outboxes) sent += ob.size();
    if (sent > result.message_cap)
      fail(ErrorKind::Resource, "superstep " + std::to_string(step) + " produced " +
                                    std::to_string(sent) + " messages, cap is " +
                                    std::to_string(result.message_cap));

    std::fill(inbox_offsets.begin(), inbox_offsets.end(), 0);
    for (const auto& ob : outboxes)
      for (const auto& r : ob) ++inbox_offsets[r.destination + 1];
    for (std::size_t i = 0; i < n; ++i) inbox_offsets[i + 1] += inbox_offsets[i];
    inbox.resize(sent);
    {
      // Walking sources in ascending order keeps every inbox grouped by source.
      std::vector<std::size_t> cursor(inbox_offsets.begin(), inbox_offsets.end() - 1);
      for (VertexId v = 0; v < n; ++v) {
        const auto [b, e] = sent_range[v];
        const auto& ob = outboxes[assignment[v]];
        for (std::size_t i = b; i < e; ++i) {
          const auto& r = ob[i];
          inbox[cursor[r.destination]++] = Envelope<Msg>{r.source, r.payload};
        }
      }
      for (auto& ob : outboxes) ob.clear();
    }

    SuperstepStats stats;
    stats.superstep = step;
    stats.messages_sent = sent;
    stats.messages_delivered = delivered;
    for (auto a : active_counts) stats.active_vertices += a;
    std::fill(active_counts.begin(), active_counts.end(), 0);
    stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    result.stats.push_back(stats);
    result.total_messages += sent;
    result.peak_messages = std::max(result.peak_messages, sent);
    result.supersteps = step + 1;
    if (cfg.verbose) detail::emit_stats(cfg, stats);

    if (sent == 0 && std::all_of(halted.begin(), halted.end(), [](std::uint8_t h) { return h != 0; }))
      break;
    if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline)
      fail(ErrorKind::Timeout, "deadline exceeded after superstep " + std::to_string(step));
  }
  return result;
}

/// Convenience overload with every vertex on worker 0..workers-1 by id modulo.
std::vector<std::uint32_t> round_robin_assignment(std::size_t n, std::uint32_t workers);

}  // namespace gila::bsp
