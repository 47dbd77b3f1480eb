#include "gila/partition.hpp"

#include <cmath>
#include <fstream>

#include "gila/random.hpp"

namespace gila {

namespace {

struct LabelMessage {
  std::uint32_t label;
};

struct SpinnerState {
  std::uint32_t label = 0;
  std::uint32_t desired = 0;
};

// Superstep 0 announces labels; superstep 1 picks the desired label.
struct SpinnerRound {
  using State = SpinnerState;
  using Message = LabelMessage;

  std::uint32_t parts;
  std::uint64_t seed;

  void compute(bsp::Context<Message>& ctx, State& s,
               std::span<const bsp::Envelope<Message>> inbox) const {
    if (ctx.superstep() == 0) {
      s.desired = s.label;
      ctx.send_to_neighbors({s.label});
      return;
    }
    ctx.vote_to_halt();
    if (inbox.empty()) return;
    std::vector<std::uint32_t> counts(parts, 0);
    for (const auto& e : inbox) ++counts[e.payload.label];
    const std::uint32_t best = *std::max_element(counts.begin(), counts.end());
    if (counts[s.label] == best) {
      s.desired = s.label;
      return;
    }
    std::uint64_t best_key = ~0ULL;
    for (std::uint32_t p = 0; p < parts; ++p) {
      if (counts[p] != best) continue;
      const std::uint64_t key = hash_combine(seed, hash_combine(ctx.vertex(), p));
      if (key < best_key) {
        best_key = key;
        s.desired = p;
      }
    }
  }
};

}  // namespace

std::size_t spinner_capacity(std::size_t n, const SpinnerConfig& cfg) {
  if (cfg.num_partitions == 0) fail(ErrorKind::Config, "num_partitions must be positive");
  if (!(cfg.capacity_factor >= 1.0)) fail(ErrorKind::Config, "capacity_factor must be >= 1");
  const double raw = cfg.capacity_factor * static_cast<double>(n) / cfg.num_partitions;
  const auto cap = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (cap < 1 || cap * cfg.num_partitions < n)
    fail(ErrorKind::Config, "partition capacity " + std::to_string(cap) + " cannot hold " +
                                std::to_string(n) + " vertices");
  return cap;
}

std::vector<std::uint32_t> random_balanced_labeling(std::size_t n, std::uint32_t parts,
                                                    std::uint64_t seed) {
  std::vector<VertexId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<VertexId>(i);
  SplitMix rng(hash_combine(seed, 0x5350494eULL));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::uint32_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[order[i]] = static_cast<std::uint32_t>(i % parts);
  return label;
}

PartitionLabeling spinner_partition(const Graph& g, const SpinnerConfig& cfg,
                                    const bsp::RunConfig& run) {
  const std::size_t n = g.vertex_count();
  if (cfg.num_partitions > n)
    fail(ErrorKind::Config, "more partitions than vertices");
  if (cfg.max_iterations == 0) fail(ErrorKind::Config, "max_iterations must be positive");
  PartitionLabeling out;
  out.num_partitions = cfg.num_partitions;
  out.capacity = spinner_capacity(n, cfg);

  const std::uint32_t parts = cfg.num_partitions;
  std::vector<SpinnerState> states(n);
  {
    auto initial = random_balanced_labeling(n, parts, cfg.seed);
    for (std::size_t v = 0; v < n; ++v) states[v].label = initial[v];
  }
  auto loads_of = [&] {
    std::vector<std::size_t> loads(parts, 0);
    for (const auto& s : states) ++loads[s.label];
    return loads;
  };
  {
    auto loads = loads_of();
    out.peak_load.push_back(*std::max_element(loads.begin(), loads.end()));
  }

  bsp::RunConfig round_cfg = run;
  round_cfg.max_supersteps = 2;
  const auto assignment = bsp::round_robin_assignment(n, round_cfg.workers);
  const SpinnerRound program{parts, cfg.seed};

  for (std::uint32_t it = 0; it < cfg.max_iterations; ++it) {
    bsp::Aggregators aggs;
    bsp::run(g, program, states, assignment, round_cfg, aggs);

    // Admission: tentatively accept every desired move, then refuse the
    // highest-id arrivals of any overfull partition until all fit.
    std::vector<std::size_t> loads(parts, 0);
    std::vector<std::vector<VertexId>> arrivals(parts);
    for (VertexId v = 0; v < n; ++v) {
      const auto& s = states[v];
      ++loads[s.desired];
      if (s.desired != s.label) arrivals[s.desired].push_back(v);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t p = 0; p < parts; ++p) {
        while (loads[p] > out.capacity && !arrivals[p].empty()) {
          const VertexId v = arrivals[p].back();
          arrivals[p].pop_back();
          --loads[p];
          ++loads[states[v].label];
          states[v].desired = states[v].label;
          changed = true;
        }
      }
    }
    std::size_t moved = 0;
    for (auto& s : states) {
      if (s.desired != s.label) ++moved;
      s.label = s.desired;
    }
    const std::size_t peak = *std::max_element(loads.begin(), loads.end());
    if (peak > out.capacity)
      fail(ErrorKind::ContractViolation, "partition capacity exceeded in iteration " +
                                             std::to_string(it));
    out.peak_load.push_back(peak);
    out.migrations.push_back(moved);
    out.iterations = it + 1;
    if (moved == 0) {
      out.converged = true;
      break;
    }
  }
  out.label.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.label[v] = states[v].label;
  return out;
}

std::size_t edge_cut(const Graph& g, std::span<const std::uint32_t> labels) {
  std::size_t cut = 0;
  for (auto [u, v] : g.edges())
    if (labels[u] != labels[v]) ++cut;
  return cut;
}

void write_labeling(const Graph& g, std::span<const std::uint32_t> labels,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << g.external_id(v) << ' ' << labels[v] << '\n';
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gila
