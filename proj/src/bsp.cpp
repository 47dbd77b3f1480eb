#include "gila/bsp.hpp"

#include <iostream>

namespace gila::bsp {

std::uint64_t default_message_cap(const Graph& g) {
  return std::max<std::uint64_t>(64 * static_cast<std::uint64_t>(g.edge_count()), 64);
}

AggregatorId Aggregators::add(std::string name, double identity, Combine combine) {
  for (const auto& s : slots_)
    if (s.name == name) fail(ErrorKind::InvalidArgument, "aggregator '" + name + "' registered twice");
  slots_.push_back(Slot{std::move(name), identity, std::move(combine), identity});
  return slots_.size() - 1;
}

AggregatorId Aggregators::add_max(std::string name) {
  return add(std::move(name), -std::numeric_limits<double>::infinity(),
             [](double a, double b) { return std::max(a, b); });
}

AggregatorId Aggregators::add_min(std::string name) {
  return add(std::move(name), std::numeric_limits<double>::infinity(),
             [](double a, double b) { return std::min(a, b); });
}

AggregatorId Aggregators::id(std::string_view name) const {
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].name == name) return i;
  fail(ErrorKind::Lookup, "unregistered aggregator '" + std::string(name) + "'");
}

double Aggregators::read(AggregatorId id) const {
  if (id >= slots_.size()) fail(ErrorKind::Lookup, "unregistered aggregator #" + std::to_string(id));
  return slots_[id].published;
}

void Aggregators::begin_superstep(std::size_t workers) {
  partial_.assign(workers, std::vector<double>(slots_.size()));
  for (auto& p : partial_)
    for (std::size_t i = 0; i < slots_.size(); ++i) p[i] = slots_[i].identity;
}

void Aggregators::contribute(std::size_t worker, AggregatorId id, double value) {
  if (id >= slots_.size()) fail(ErrorKind::Lookup, "unregistered aggregator #" + std::to_string(id));
  auto& cell = partial_[worker][id];
  cell = slots_[id].combine(cell, value);
}

void Aggregators::publish() {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    double acc = slots_[i].identity;
    for (const auto& p : partial_) acc = slots_[i].combine(acc, p[i]);
    slots_[i].published = acc;
  }
}

namespace detail {

void emit_stats(const RunConfig& cfg, const SuperstepStats& s) {
  std::ostream& os = cfg.log ? *cfg.log : std::cerr;
  os << "superstep=" << s.superstep << " sent=" << s.messages_sent
     << " delivered=" << s.messages_delivered << " active=" << s.active_vertices
     << " wall_ms=" << s.wall_ms << '\n';
}

}  // namespace detail

std::vector<std::uint32_t> round_robin_assignment(std::size_t n, std::uint32_t workers) {
  std::vector<std::uint32_t> a(n);
  for (std::size_t v = 0; v < n; ++v) a[v] = static_cast<std::uint32_t>(v % workers);
  return a;
}

}  // namespace gila::bsp
