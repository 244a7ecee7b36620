// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "chainflow/ir.hpp"
#include "chainflow/loop_order.hpp"
#include "chainflow/traffic.hpp"
#include "chainflow/workloads.hpp"
#include "json.hpp"

namespace chainflow {

using Json = nlohmann::ordered_json;

/// Builds and analyzes (dominance, transitivity) a DAG from its JSON form.
/// Edge `pattern` and node `numcast` / `parallel_multicast` fields are kept
/// when present. Throws ValidationError, with the byte offset for syntax
/// errors.
TensorDag dag_from_json(const Json& j);
TensorDag parse_dag_json(const std::string& text);

/// True when every edge carries a pattern.
bool fully_classified(const TensorDag& dag);

/// Plain schema; `annotated` adds dominance, multicast, transitivity,
/// patterns, loop orders, schedule, critical path and diagnostics.
Json dag_to_json(const TensorDag& dag, bool annotated);

/// {"<node id>": [ranks...], ..., "penalty": p, "attempts": a}
Json assignment_to_json(const LoopOrderAssignment& a);
Json trace_to_json(const CgTrace& t);
Json report_to_json(const TrafficReport& r, std::uint64_t word_bytes);

}  // namespace chainflow
