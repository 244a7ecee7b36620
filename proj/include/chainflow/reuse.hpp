// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "chainflow/ir.hpp"

namespace chainflow {

/// Assigns one reuse pattern per edge and the numcast / parallel_multicast
/// node attributes. Rules fire in a fixed order per edge and a later rule
/// overwrites an earlier one; each overwrite is logged in dag.diagnostics.
///
/// Requires dominance, transitivity and the critical path (see
/// analyze_structure). Throws UnclassifiedError if an edge ends unassigned.
void classify(TensorDag& dag);

/// Human-readable edge table: src, dest, tensor, transitive flag, pattern.
std::string pattern_table(const TensorDag& dag);

/// Graphviz text. Edge colours: pipelineable blue, writeback brick red, hold
/// cyan, non-transitive edges of a multicasting node green, sequential black.
std::string to_dot(const TensorDag& dag);

}  // namespace chainflow
