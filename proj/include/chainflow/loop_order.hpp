// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "chainflow/ir.hpp"

namespace chainflow {

struct LoopOrderAssignment {
  std::map<int, LoopOrder> orders;  // node id -> outermost-first ranks
  std::size_t swizzle_penalty = 0;
  /// Epsilon levels exhausted before the returned assignment was found.
  std::size_t attempts = 0;
  /// Epsilon level that produced the assignment.
  std::size_t epsilon = 0;
};

/// Producer-side and consumer-side views of the edge tensor, both expressed
/// in producer rank names, differ.
bool is_swizzled(const TensorEdge& edge, const LoopOrder& producer_order,
                 const LoopOrder& consumer_order);

/// Producer outermost rank uncontracted, consumer outermost rank shared, and
/// the tensor not swizzled.
bool pipeline_compatible(const EinsumNode& producer, const TensorEdge& edge,
                         const LoopOrder& producer_order, const LoopOrder& consumer_order);

/// Consumer's order restricted to the edge tensor, mapped back to producer
/// rank names.
LoopOrder consumer_projection(const TensorEdge& edge, const LoopOrder& consumer_order);

/// Candidate loop orders in search order: permutations of the declared ranks
/// in lexicographic index order, those with the dominant rank outermost first.
std::vector<LoopOrder> candidate_orders(const EinsumNode& node);

/// 0, 1, ..., |edges|.
std::vector<std::size_t> default_epsilon_schedule(const TensorDag& dag);

/// Backtracking search, nodes in schedule order, candidates in
/// candidate_orders() order. Pipelineable and hold edges must be pipeline
/// compatible, the consumers of a multicasting node must agree on the
/// multicast tensor's order, and swizzled writeback/sequential edges are
/// counted against the current epsilon.
///
/// Throws InfeasibleEdgeError when the pipeline and multicast constraints
/// alone are unsatisfiable, NoAssignmentError when every epsilon is exhausted.
LoopOrderAssignment assign_loop_orders(const TensorDag& dag,
                                       std::vector<std::size_t> epsilon_schedule = {});

/// Swizzle count of a complete assignment over writeback/sequential edges.
std::size_t swizzle_penalty(const TensorDag& dag, const std::map<int, LoopOrder>& orders);

/// True when every hard constraint of assign_loop_orders holds.
bool satisfies_constraints(const TensorDag& dag, const std::map<int, LoopOrder>& orders);

void apply_assignment(TensorDag& dag, const LoopOrderAssignment& assignment);

}  // namespace chainflow
