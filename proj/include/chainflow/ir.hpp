// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chainflow {

using Words = std::uint64_t;

enum class RankKind { uncontracted, contracted };

struct Rank {
  std::string name;
  std::uint64_t size = 1;
  RankKind kind = RankKind::uncontracted;
  /// True when some input of the owning node stores this rank compressed
  /// (the column rank of a CSR operand).
  bool compressed = false;
};

struct TensorRef {
  std::string name;
  std::vector<std::string> ranks;
  bool sparse = false;
  std::optional<std::uint64_t> nnz;
};

enum class OpKind { tensor_mac, tensor_add, small_inverse };

enum class Dominance { U, C, bal, small };

struct DominanceClass {
  Dominance kind = Dominance::bal;
  std::optional<std::string> dominant_rank;  // present iff kind is U or C

  friend bool operator==(const DominanceClass&, const DominanceClass&) = default;
};

enum class ReusePattern {
  sequential,
  pipelineable,
  pipeline_with_writeback,
  pipeline_with_hold
};

/// Rank names, outermost loop first.
using LoopOrder = std::vector<std::string>;

/// Producer rank name -> consumer rank name.
using RankMap = std::map<std::string, std::string>;

struct EinsumNode {
  int id = 0;
  OpKind op = OpKind::tensor_mac;
  std::vector<TensorRef> inputs;
  TensorRef output;
  std::vector<Rank> ranks;
  /// Free-form display name ("4", "2b'", ...). Not used for identity.
  std::string label;

  // Computed attributes.
  DominanceClass dominance;
  int numcast = 0;
  bool parallel_multicast = false;
  std::optional<LoopOrder> loop_order;

  const Rank* find_rank(std::string_view name) const;
  const Rank& rank(std::string_view name) const;
  /// Multiply-accumulate and addition nodes both count as tensor_mac for
  /// the reuse rules; only small_inverse is excluded.
  bool is_mac_like() const { return op != OpKind::small_inverse; }
};

struct TensorEdge {
  int src = 0;
  int dest = 0;
  TensorRef tensor;  // ranks named as in the producer
  RankMap rank_map;
  bool is_transitive = false;
  std::optional<ReusePattern> pattern;
};

struct TensorDag {
  std::vector<EinsumNode> nodes;  // sorted by id
  std::vector<TensorEdge> edges;
  std::vector<int> schedule;
  std::vector<int> critical_path;
  /// Tensors observable by the invoking application after the chain runs.
  std::vector<std::string> outputs;
  /// Edges whose pattern was rewritten by a later classification rule.
  std::vector<std::string> diagnostics;

  const EinsumNode& node(int id) const;
  EinsumNode& node(int id);
  bool has_node(int id) const;
  /// Position of `id` in `schedule`.
  std::size_t position(int id) const;
  std::vector<std::size_t> out_edges(int id) const;
  std::vector<std::size_t> in_edges(int id) const;
  bool is_output(std::string_view tensor) const;
};

/// Element (word) count of `tensor` using the rank sizes of `owner`. Sparse
/// tensors are counted in CSR form: values + column ids + one entry per row.
Words tensor_words(const EinsumNode& owner, const TensorRef& tensor,
                   bool values_only = false);

std::string_view to_string(RankKind k);
std::string_view to_string(OpKind k);
std::string_view to_string(Dominance k);
std::string_view to_string(ReusePattern p);

RankKind parse_rank_kind(std::string_view s);
OpKind parse_op_kind(std::string_view s);
Dominance parse_dominance(std::string_view s);
ReusePattern parse_reuse_pattern(std::string_view s);

}  // namespace chainflow
