#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gila/bsp.hpp"
#include "gila/graph.hpp"

namespace gila {

struct SpinnerConfig {
  std::uint32_t num_partitions = 1;
  /// Upper capacity per partition is ceil(capacity_factor * n / num_partitions).
  double capacity_factor = 1.05;
  std::uint32_t max_iterations = 30;
  std::uint64_t seed = 1;
};

struct PartitionLabeling {
  std::vector<std::uint32_t> label;
  std::uint32_t num_partitions = 1;
  std::size_t capacity = 0;
  std::uint32_t iterations = 0;
  bool converged = false;
  /// Largest partition size after each iteration (index 0 is the random start).
  std::vector<std::size_t> peak_load;
  /// Migrations admitted in each iteration.
  std::vector<std::size_t> migrations;
};

std::size_t spinner_capacity(std::size_t n, const SpinnerConfig& cfg);

/// Balanced random labeling: a seeded shuffle dealt round-robin.
std::vector<std::uint32_t> random_balanced_labeling(std::size_t n, std::uint32_t parts,
                                                    std::uint64_t seed);

/// Label-propagation partitioning with per-partition capacity. Each round a
/// vertex picks among the labels most common in its neighborhood, staying put
/// when its own label qualifies. Migrations that would overfill a partition
/// are refused, higher vertex ids first.
PartitionLabeling spinner_partition(const Graph& g, const SpinnerConfig& cfg,
                                    const bsp::RunConfig& run = {});

std::size_t edge_cut(const Graph& g, std::span<const std::uint32_t> labels);

/// Two-column text: external vertex id and partition index.
void write_labeling(const Graph& g, std::span<const std::uint32_t> labels,
                    const std::filesystem::path& path);

}  // namespace gila
