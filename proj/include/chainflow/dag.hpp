// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "chainflow/ir.hpp"

namespace chainflow {

/// Absolute and relative thresholds of the dominance test.
inline constexpr std::uint64_t kDominantMinSize = 1000;
inline constexpr std::uint64_t kDominantRatio = 100;
inline constexpr std::uint64_t kSmallRankLimit = 50;

/// Validates the graph and fills in the schedule (Kahn, ties by ascending
/// id) and the critical path (longest by edge count, ties broken by the
/// lexicographically smallest id sequence).
///
/// Throws ValidationError for malformed nodes, CycleError, and
/// RankMismatchError when an edge's rank map does not match its tensor.
TensorDag build_dag(std::vector<EinsumNode> nodes, std::vector<TensorEdge> edges,
                    std::vector<std::string> outputs = {});

DominanceClass compute_dominance(const EinsumNode& node);

/// An edge is transitive iff both endpoints lie on the critical path and the
/// edge does not join two consecutive critical-path nodes.
void mark_transitive_edges(TensorDag& dag);

/// compute_dominance on every node followed by mark_transitive_edges.
void analyze_structure(TensorDag& dag);

/// Intervening node count between producer and consumer, per edge index.
std::vector<std::size_t> reuse_distances(const TensorDag& dag);

inline constexpr std::size_t kNoNextUse = std::numeric_limits<std::size_t>::max();

/// Distance from schedule position `pos` to the next consumer of the tensor
/// produced by `producer` that is scheduled after `pos`; kNoNextUse if none.
std::size_t next_use_distance(const TensorDag& dag, int producer, std::size_t pos);

/// Critical-path nodes from `src` to `dest`, both inclusive. Empty when
/// either endpoint is off the path or `dest` precedes `src`.
std::vector<int> critical_path_segment(const TensorDag& dag, int src, int dest);

}  // namespace chainflow
