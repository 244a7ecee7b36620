// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainflow/ir.hpp"
#include "chainflow/loop_order.hpp"

namespace chainflow {

inline constexpr std::uint64_t kMiB = 1u << 20;

struct MachineConfig {
  std::uint64_t clusters = 16;
  std::uint64_t pes_per_cluster = 1024;
  std::uint64_t sram_bytes = 4 * kMiB;
  std::uint64_t rf_bytes_per_pe = 512;
  std::uint64_t word_bytes = 4;

  Words sram_words() const { return sram_bytes / word_bytes; }
  Words rf_words() const { return rf_bytes_per_pe * pes_per_cluster * clusters / word_bytes; }
  void validate() const;
};

enum class Policy { seq_flex, seq_overflow, gogeta_df, gogeta_map, ideal };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view s);
const std::vector<Policy>& all_policies();

struct TrafficOptions {
  /// Count only the values of sparse tensors (no index words).
  bool values_only = false;
};

// ---- plan ---------------------------------------------------------------
//
// Per scheduled node, in order: reads, frees of tensors with no later read,
// the output produce, hold reservations. Releases happen right after the
// reads of the consuming node. Both the analytical simulator and the
// word-level replay consume the same plan.

struct PlanRead {
  std::string tensor;
  Words words = 0;
};

struct PlanHold {
  std::string name;  // "hold:<tensor>-><dest id>"
  Words words = 0;
};

struct PlanStep {
  int node = 0;
  std::vector<PlanRead> reads;
  std::vector<std::string> releases;
  std::vector<std::string> frees;
  std::optional<PlanRead> produce;  // absent when pipelined away
  std::vector<PlanHold> reserves;
  Words eliminated_read_words = 0;
  Words eliminated_write_words = 0;
};

struct TrafficPlan {
  std::vector<PlanStep> steps;
  /// Tensor -> sorted schedule positions of its reads.
  std::map<std::string, std::vector<std::size_t>> read_positions;
  std::map<std::string, Words> sizes;
  /// Tensors not produced by any node (start in DRAM, clean).
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  /// When true, produce overflow may evict other tensors by reuse distance.
  bool distance_eviction = false;
};

/// Edge indices whose producer->consumer transfer is pipelined away under a
/// gogeta policy with `config`.
std::vector<std::size_t> realized_pipelined_edges(const TensorDag& dag,
                                                  const LoopOrderAssignment& assignment,
                                                  const MachineConfig& config,
                                                  const TrafficOptions& opt = {});

/// Plan for a non-ideal policy. seq_flex and seq_overflow share one plan.
TrafficPlan build_plan(const TensorDag& dag, const LoopOrderAssignment* assignment,
                       const MachineConfig& config, Policy policy,
                       const TrafficOptions& opt = {});

/// Reuse distance from position `pos` to the next read of `tensor`;
/// kNoNextUse if it is never read again.
std::size_t plan_next_use(const TrafficPlan& plan, const std::string& tensor, std::size_t pos);

// ---- results ------------------------------------------------------------

struct NodeTraffic {
  int node = 0;
  std::string label;
  Words dram_read_words = 0;
  Words dram_write_words = 0;
  Words eliminated_read_words = 0;
  Words eliminated_write_words = 0;
};

struct TrafficReport {
  Policy policy = Policy::ideal;
  Words dram_read_words = 0;
  Words dram_write_words = 0;
  std::uint64_t dram_bytes = 0;
  Words noc_intercluster_words = 0;
  Words sram_peak_words = 0;
  std::vector<NodeTraffic> per_node;

  Words dram_words() const { return dram_read_words + dram_write_words; }
};

/// Executes a plan against an SRAM of `capacity` words. The SRAM is a
/// per-tensor resident prefix plus the offset from which the tensor is also
/// valid in DRAM.
TrafficReport execute_plan(const TensorDag& dag, const TrafficPlan& plan, Words capacity);

/// Throws MissingAnnotationError for gogeta policies on a DAG without
/// patterns or without a loop-order assignment.
TrafficReport simulate(const TensorDag& dag, const LoopOrderAssignment* assignment,
                       const MachineConfig& config, Policy policy,
                       const TrafficOptions& opt = {});

/// Inter-cluster link traversals in words. Zero for one cluster and for
/// non-gogeta policies.
Words noc_traversals(const TensorDag& dag, const LoopOrderAssignment& assignment,
                     const MachineConfig& config, Policy policy,
                     const TrafficOptions& opt = {});

/// NoC words of one producer/consumer pair, treated as pipelined.
Words noc_pair(const TensorDag& dag, const LoopOrderAssignment& assignment,
               const MachineConfig& config, Policy policy, int src, int dest,
               const TrafficOptions& opt = {});

/// Rank a gogeta_map node is sliced along: its dominant rank, else the
/// outermost loop rank.
std::string sliced_rank(const EinsumNode& node, const LoopOrderAssignment& assignment);

// ---- sweeps -------------------------------------------------------------

struct SweepCell {
  std::string dataset;
  std::uint64_t N = 0;
  double sram_mb = 0;
  Policy policy = Policy::ideal;
  TrafficReport report;
};

struct SweepSpec {
  std::vector<std::string> datasets;
  std::vector<std::uint64_t> Ns;
  std::vector<double> sram_mb;
  std::vector<Policy> policies;
  int iters = 10;
  MachineConfig base;
  TrafficOptions options;
  unsigned jobs = 1;
};

/// Rows ordered dataset, N, sram, policy, each in the order given. GCN
/// datasets ignore N and contribute one N value (their feature width).
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

/// dataset,N,sram_mb,policy,dram_mb,noc_kb,sram_peak_kb
std::string sweep_csv(const std::vector<SweepCell>& cells, std::uint64_t word_bytes);

/// seq_flex / gogeta_map per (dataset, N, sram) cell that has both.
std::vector<double> reduction_factors(const std::vector<SweepCell>& cells);
double geomean(const std::vector<double>& xs);

}  // namespace chainflow
