// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only builders and oracles.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chainflow/ir.hpp"
#include "chainflow/loop_order.hpp"
#include "chainflow/traffic.hpp"

namespace chainflow::testing {

Rank U(const std::string& name, std::uint64_t size);
Rank C(const std::string& name, std::uint64_t size, bool compressed = false);
TensorRef T(const std::string& name, std::vector<std::string> ranks);

EinsumNode make_node(int id, std::vector<Rank> ranks, std::vector<TensorRef> inputs,
                     TensorRef output, OpKind op = OpKind::tensor_mac, std::string label = "");
TensorEdge make_edge(int src, int dest, RankMap map);

/// Z[m,n] = A[m,k] B[k,n].
EinsumNode gemm_node(int id, std::uint64_t M, std::uint64_t K, std::uint64_t N,
                     const std::string& a = "A", const std::string& b = "B",
                     const std::string& z = "Z");

/// Residual-block chain: n0 -> n1 -> n2 plus the skip n0 -> n2, every node
/// U dominant (M = 10^5, small inner ranks).
TensorDag resnet_chain();

/// Five nodes whose pipeline edges force exactly one swizzled writeback.
TensorDag forced_swizzle_dag();

/// Two producers whose outputs meet in an outer product: the second
/// pipeline edge can never be compatible.
TensorDag infeasible_pipeline_dag();

/// Exhaustive search over the product of candidate_orders in schedule
/// order; first tuple in that order at the smallest feasible epsilon.
std::optional<LoopOrderAssignment> brute_force_assign(const TensorDag& dag,
                                                      const std::vector<std::size_t>& eps);

struct ReplayResult {
  Words reads = 0;
  Words writes = 0;
  Words peak = 0;
  std::vector<Words> node_reads;
  std::vector<Words> node_writes;
};

/// Word-by-word replay of a traffic plan: explicit residency and DRAM
/// validity per word, victim chosen afresh for every evicted word.
ReplayResult replay_words(const TensorDag& dag, const TrafficPlan& plan, Words capacity);

struct RandomDagSpec {
  int min_nodes = 2;
  int max_nodes = 4;
  int max_ranks = 3;
  bool allow_sparse = true;
  bool allow_inverse = false;
  bool allow_large = true;
};

/// Random well-formed DAG (analyzed, unclassified). Producer and consumer
/// rank sizes agree on every edge.
TensorDag random_dag(std::mt19937_64& rng, const RandomDagSpec& spec);

/// Scalar interpretation of the CG chain for M = N = 1: counts every
/// multiply and every first touch of an application input / final output.
struct ScalarTrace {
  std::uint64_t macs = 0;
  std::uint64_t words = 0;
};
ScalarTrace scalar_cg_trace(int iters);

/// Symmetric Matrix Market text with M diagonal entries and `pairs`
/// distinct strictly-lower entries.
std::string symmetric_fixture(std::size_t M, std::size_t pairs, std::uint64_t seed);

}  // namespace chainflow::testing
