// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/ir.hpp"

#include <algorithm>

#include "chainflow/errors.hpp"

namespace chainflow {

const Rank* EinsumNode::find_rank(std::string_view name) const {
  for (const auto& r : ranks) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Rank& EinsumNode::rank(std::string_view name) const {
  const Rank* r = find_rank(name);
  if (r == nullptr) {
    throw ValidationError("node " + std::to_string(id) + " has no rank '" +
                          std::string(name) + "'");
  }
  return *r;
}

namespace {

auto node_lower_bound(const std::vector<EinsumNode>& nodes, int id) {
  return std::lower_bound(nodes.begin(), nodes.end(), id,
                          [](const EinsumNode& n, int v) { return n.id < v; });
}

}  // namespace

bool TensorDag::has_node(int id) const {
  auto it = node_lower_bound(nodes, id);
  return it != nodes.end() && it->id == id;
}

const EinsumNode& TensorDag::node(int id) const {
  auto it = node_lower_bound(nodes, id);
  if (it == nodes.end() || it->id != id) {
    throw ValidationError("unknown node id " + std::to_string(id));
  }
  return *it;
}

EinsumNode& TensorDag::node(int id) {
  return const_cast<EinsumNode&>(std::as_const(*this).node(id));
}

std::size_t TensorDag::position(int id) const {
  auto it = std::find(schedule.begin(), schedule.end(), id);
  if (it == schedule.end()) {
    throw ValidationError("node " + std::to_string(id) + " is not scheduled");
  }
  return static_cast<std::size_t>(it - schedule.begin());
}

std::vector<std::size_t> TensorDag::out_edges(int id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].src == id) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> TensorDag::in_edges(int id) const {
  std::vector<std::size_t> in;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].dest == id) in.push_back(i);
  }
  return in;
}

bool TensorDag::is_output(std::string_view tensor) const {
  return std::find(outputs.begin(), outputs.end(), tensor) != outputs.end();
}

Words tensor_words(const EinsumNode& owner, const TensorRef& tensor, bool values_only) {
  if (tensor.sparse) {
    const Words nnz = tensor.nnz.value_or(0);
    if (values_only) return nnz;
    const Words rows = tensor.ranks.empty() ? 0 : owner.rank(tensor.ranks.front()).size;
    return 2 * nnz + rows;
  }
  Words w = 1;
  for (const auto& r : tensor.ranks) w *= owner.rank(r).size;
  return w;
}

std::string_view to_string(RankKind k) {
  return k == RankKind::contracted ? "contracted" : "uncontracted";
}

std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::tensor_mac: return "tensor_mac";
    case OpKind::tensor_add: return "tensor_add";
    case OpKind::small_inverse: return "small_inverse";
  }
  return "?";
}

std::string_view to_string(Dominance k) {
  switch (k) {
    case Dominance::U: return "U";
    case Dominance::C: return "C";
    case Dominance::bal: return "bal";
    case Dominance::small: return "small";
  }
  return "?";
}

std::string_view to_string(ReusePattern p) {
  switch (p) {
    case ReusePattern::sequential: return "sequential";
    case ReusePattern::pipelineable: return "pipelineable";
    case ReusePattern::pipeline_with_writeback: return "pipeline_with_writeback";
    case ReusePattern::pipeline_with_hold: return "pipeline_with_hold";
  }
  return "?";
}

RankKind parse_rank_kind(std::string_view s) {
  if (s == "uncontracted") return RankKind::uncontracted;
  if (s == "contracted") return RankKind::contracted;
  throw ValidationError("unknown rank kind '" + std::string(s) + "'");
}

OpKind parse_op_kind(std::string_view s) {
  if (s == "tensor_mac") return OpKind::tensor_mac;
  if (s == "tensor_add") return OpKind::tensor_add;
  if (s == "small_inverse") return OpKind::small_inverse;
  throw ValidationError("unknown op '" + std::string(s) + "'");
}

Dominance parse_dominance(std::string_view s) {
  if (s == "U") return Dominance::U;
  if (s == "C") return Dominance::C;
  if (s == "bal") return Dominance::bal;
  if (s == "small") return Dominance::small;
  throw ValidationError("unknown dominance '" + std::string(s) + "'");
}

ReusePattern parse_reuse_pattern(std::string_view s) {
  if (s == "sequential") return ReusePattern::sequential;
  if (s == "pipelineable") return ReusePattern::pipelineable;
  if (s == "pipeline_with_writeback") return ReusePattern::pipeline_with_writeback;
  if (s == "pipeline_with_hold") return ReusePattern::pipeline_with_hold;
  throw ValidationError("unknown reuse pattern '" + std::string(s) + "'");
}

}  // namespace chainflow
