#include <limits>

#include "doctest.h"
#include "gila/bsp.hpp"
#include "gila/errors.hpp"
#include "support.hpp"

using namespace gila;
namespace ts = testing_support;

namespace {

struct MinLabel {
  using Message = VertexId;
  struct State {
    VertexId label = 0;
    std::uint64_t updates = 0;
  };
  void compute(bsp::Context<Message>& ctx, State& s, std::span<const bsp::Envelope<Message>> inbox) const {
    bool changed = ctx.superstep() == 0;
    if (changed) s.label = ctx.vertex();
    for (const auto& e : inbox)
      if (e.payload < s.label) {
        s.label = e.payload;
        changed = true;
      }
    if (changed) {
      ++s.updates;
      ctx.send_to_neighbors(s.label);
    }
    ctx.vote_to_halt();
  }
};

struct NeverHalts {
  using Message = int;
  struct State {};
  void compute(bsp::Context<Message>&, State&, std::span<const bsp::Envelope<Message>>) const {}
};

struct SendsToStranger {
  using Message = int;
  struct State {};
  void compute(bsp::Context<Message>& ctx, State&, std::span<const bsp::Envelope<Message>>) const {
    if (ctx.vertex() == 0 && ctx.superstep() == 1) ctx.send(3, 1);
    if (ctx.superstep() >= 2) ctx.vote_to_halt();
  }
};

// Superstep 0: contribute the vertex's value to sum/max. Superstep 1: record what is read.
struct AggProbe {
  using Message = int;
  struct State {
    double contribute = 0.0;
    double sum_seen = -1.0;
    double max_seen = -1.0;
    double sum_next = -1.0;
  };
  bsp::AggregatorId sum = 0, max = 0;
  void compute(bsp::Context<Message>& ctx, State& s, std::span<const bsp::Envelope<Message>>) const {
    if (ctx.superstep() == 0) {
      ctx.aggregate(sum, s.contribute);
      ctx.aggregate("max", s.contribute);
    } else if (ctx.superstep() == 1) {
      s.sum_seen = ctx.read_aggregate(sum);
      s.max_seen = ctx.read_aggregate("max");
    } else {
      s.sum_next = ctx.read_aggregate(sum);
      ctx.vote_to_halt();
    }
  }
};

// Records the inbox exactly as delivered: (source, payload) pairs.
struct InboxRecorder {
  using Message = std::uint64_t;
  struct State {
    std::vector<std::pair<VertexId, std::uint64_t>> got;
  };
  void compute(bsp::Context<Message>& ctx, State& s, std::span<const bsp::Envelope<Message>> inbox) const {
    for (const auto& e : inbox) s.got.emplace_back(e.source, e.payload);
    if (ctx.superstep() < 3) {
      for (VertexId u : ctx.neighbors()) ctx.send(u, hash_combine(ctx.vertex(), ctx.superstep() * 1000 + u));
      ctx.send_to_neighbors(ctx.superstep());
    } else {
      ctx.vote_to_halt();
    }
  }
};

template <class P>
std::pair<std::vector<typename P::State>, bsp::RunResult> run_with(const Graph& g, const P& program,
                                                                   std::uint32_t workers,
                                                                   bsp::Aggregators aggs = {},
                                                                   std::uint64_t max_supersteps = 1000) {
  std::vector<typename P::State> states(g.vertex_count());
  auto assignment = bsp::round_robin_assignment(g.vertex_count(), workers);
  bsp::RunConfig cfg;
  cfg.workers = workers;
  cfg.max_supersteps = max_supersteps;
  auto r = bsp::run(g, program, states, assignment, cfg, aggs);
  return {std::move(states), r};
}

}  // namespace

TEST_SUITE("bsp-engine") {
  TEST_CASE("min-label flooding on a path of 5 finishes in diameter + 1 supersteps") {
    auto g = ts::path_graph(5);
    auto [states, r] = run_with(g, MinLabel{}, 1);
    for (const auto& s : states) CHECK(s.label == 0);
    // The last superstep carries no messages and only confirms the halt.
    CHECK(r.supersteps == 5 + 1);
    CHECK(r.stats[r.supersteps - 1].messages_sent == 0);
    CHECK(r.stats[4].messages_sent > 0);
  }

  TEST_CASE("worker count does not change final states") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto g = ts::random_graph(150, 220, seed);
      auto [base, r1] = run_with(g, InboxRecorder{}, 1);
      for (std::uint32_t w : {2u, 4u, 8u}) {
        auto [other, rw] = run_with(g, InboxRecorder{}, w);
        CHECK(rw.supersteps == r1.supersteps);
        for (VertexId v = 0; v < g.vertex_count(); ++v) REQUIRE(other[v].got == base[v].got);
      }
      auto [l1, a] = run_with(g, MinLabel{}, 1);
      auto [l4, b] = run_with(g, MinLabel{}, 4);
      for (VertexId v = 0; v < g.vertex_count(); ++v) CHECK(l1[v].label == l4[v].label);
    }
  }

  TEST_CASE("inbox is grouped by ascending source, each source in send order") {
    auto g = ts::complete_graph(6);
    auto [states, r] = run_with(g, InboxRecorder{}, 3);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const auto& got = states[v].got;
      // 3 supersteps of deliveries, 5 neighbours, 2 messages each.
      REQUIRE(got.size() == 3 * 5 * 2);
      for (std::size_t step = 0; step < 3; ++step) {
        for (std::size_t i = 0; i < 10; ++i) {
          const auto& [src, payload] = got[step * 10 + i];
          const VertexId expect_src = static_cast<VertexId>((i / 2) + ((i / 2) >= v ? 1 : 0));
          CHECK(src == expect_src);
          if (i % 2 == 0)
            CHECK(payload == hash_combine(src, step * 1000 + v));
          else
            CHECK(payload == step);
        }
      }
    }
  }

  TEST_CASE("a program that never halts stops at max_supersteps") {
    auto g = ts::path_graph(4);
    auto [states, r] = run_with(g, NeverHalts{}, 2, {}, 10);
    CHECK(r.supersteps == 10);
  }

  TEST_CASE("sending to a non-neighbour is a contract violation naming vertex and superstep") {
    auto g = ts::path_graph(4);
    try {
      run_with(g, SendsToStranger{}, 1);
      FAIL("expected a contract violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ContractViolation);
      const std::string what = e.what();
      CHECK(what.find("vertex 0") != std::string::npos);
      CHECK(what.find("superstep 1") != std::string::npos);
    }
  }

  TEST_CASE("message cap turns a blow-up into a resource error") {
    auto g = ts::complete_graph(5);
    std::vector<InboxRecorder::State> states(5);
    auto assignment = bsp::round_robin_assignment(5, 1);
    bsp::RunConfig cfg;
    cfg.message_cap = 10;
    bsp::Aggregators aggs;
    try {
      bsp::run(g, InboxRecorder{}, states, assignment, cfg, aggs);
      FAIL("expected a resource error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Resource);
    }
  }

  TEST_CASE("aggregators expose the previous superstep's fold") {
    auto g = ts::path_graph(3);
    bsp::Aggregators aggs;
    AggProbe probe;
    probe.sum = aggs.add_sum("sum");
    probe.max = aggs.add_max("max");
    std::vector<AggProbe::State> states(3);
    states[0].contribute = 2;
    states[1].contribute = 7;
    states[2].contribute = 5;
    auto assignment = bsp::round_robin_assignment(3, 2);
    bsp::RunConfig cfg;
    cfg.workers = 2;
    bsp::run(g, probe, states, assignment, cfg, aggs);
    for (const auto& s : states) {
      CHECK(s.sum_seen == 14.0);
      CHECK(s.max_seen == 7.0);
      // Nothing was contributed in superstep 1, so superstep 2 reads the identity.
      CHECK(s.sum_next == 0.0);
    }
  }

  TEST_CASE("sum of ones over three vertices reads 3") {
    auto g = ts::path_graph(3);
    bsp::Aggregators aggs;
    AggProbe probe;
    probe.sum = aggs.add_sum("sum");
    probe.max = aggs.add_max("max");
    std::vector<AggProbe::State> states(3);
    for (auto& s : states) s.contribute = 1;
    auto assignment = bsp::round_robin_assignment(3, 1);
    bsp::run(g, probe, states, assignment, {}, aggs);
    CHECK(states[0].sum_seen == 3.0);
  }

  TEST_CASE("unregistered aggregator name is a lookup error") {
    bsp::Aggregators aggs;
    aggs.add_sum("present");
    try {
      aggs.id("absent");
      FAIL("expected lookup error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Lookup);
    }
  }

  TEST_CASE("min aggregator") {
    bsp::Aggregators aggs;
    auto id = aggs.add_min("lo");
    aggs.begin_superstep(2);
    aggs.contribute(0, id, 4.0);
    aggs.contribute(1, id, -1.5);
    aggs.publish();
    CHECK(aggs.read(id) == -1.5);
  }

  TEST_CASE("message accounting: delivered in s+1 equals sent in s") {
    for (std::uint32_t w : {1u, 3u}) {
      auto g = ts::random_graph(80, 160, 9);
      auto [states, r] = run_with(g, InboxRecorder{}, w);
      for (std::size_t s = 0; s + 1 < r.stats.size(); ++s)
        CHECK(r.stats[s + 1].messages_delivered == r.stats[s].messages_sent);
      std::uint64_t total = 0;
      for (const auto& st : r.stats) total += st.messages_sent;
      CHECK(total == r.total_messages);
    }
  }

  TEST_CASE("halted vertices wake up on incoming messages") {
    // MinLabel halts every vertex each superstep; labels still propagate end to end.
    auto g = ts::path_graph(30);
    auto [states, r] = run_with(g, MinLabel{}, 4);
    CHECK(states[29].label == 0);
  }

  TEST_CASE("invalid run configurations are rejected") {
    auto g = ts::path_graph(3);
    std::vector<MinLabel::State> states(3);
    bsp::Aggregators aggs;
    std::vector<std::uint32_t> assignment(3, 0);
    bsp::RunConfig cfg;
    cfg.workers = 0;
    CHECK_THROWS_AS(bsp::run(g, MinLabel{}, states, assignment, cfg, aggs), Error);
    cfg.workers = 1;
    cfg.max_supersteps = 0;
    CHECK_THROWS_AS(bsp::run(g, MinLabel{}, states, assignment, cfg, aggs), Error);
    cfg.max_supersteps = 5;
    assignment[2] = 1;
    CHECK_THROWS_AS(bsp::run(g, MinLabel{}, states, assignment, cfg, aggs), Error);
    std::vector<std::uint32_t> short_assignment(2, 0);
    CHECK_THROWS_AS(bsp::run(g, MinLabel{}, states, short_assignment, cfg, aggs), Error);
  }

  TEST_CASE("deadline aborts with a timeout error") {
    auto g = ts::path_graph(4);
    std::vector<NeverHalts::State> states(4);
    auto assignment = bsp::round_robin_assignment(4, 1);
    bsp::RunConfig cfg;
    cfg.max_supersteps = std::numeric_limits<std::uint64_t>::max();
    cfg.deadline = std::chrono::steady_clock::now();
    bsp::Aggregators aggs;
    try {
      bsp::run(g, NeverHalts{}, states, assignment, cfg, aggs);
      FAIL("expected timeout");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Timeout);
    }
  }
}
