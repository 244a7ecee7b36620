// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/dag.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include "chainflow/errors.hpp"

namespace chainflow {

namespace {

std::string node_tag(const EinsumNode& n) {
  return "node " + std::to_string(n.id) + (n.label.empty() ? "" : " (" + n.label + ")");
}

void validate_tensor(const EinsumNode& n, const TensorRef& t) {
  if (t.ranks.empty()) {
    throw ValidationError(node_tag(n) + ": tensor '" + t.name + "' has no ranks");
  }
  std::set<std::string> seen;
  Words dense = 1;
  for (const auto& r : t.ranks) {
    if (!seen.insert(r).second) {
      throw ValidationError(node_tag(n) + ": tensor '" + t.name + "' repeats rank '" + r + "'");
    }
    const Rank* rank = n.find_rank(r);
    if (rank == nullptr) {
      throw ValidationError(node_tag(n) + ": tensor '" + t.name + "' uses undeclared rank '" +
                            r + "'");
    }
    dense *= rank->size;
  }
  if (t.sparse && !t.nnz) {
    throw ValidationError(node_tag(n) + ": sparse tensor '" + t.name + "' needs nnz");
  }
  if (t.nnz && *t.nnz > dense) {
    throw ValidationError(node_tag(n) + ": tensor '" + t.name + "' has nnz above its size");
  }
}

void validate_node(const EinsumNode& n) {
  std::set<std::string> declared;
  for (const auto& r : n.ranks) {
    if (r.size < 1) {
      throw ValidationError(node_tag(n) + ": rank '" + r.name + "' has size 0");
    }
    if (!declared.insert(r.name).second) {
      throw ValidationError(node_tag(n) + ": rank '" + r.name + "' declared twice");
    }
  }
  std::set<std::string> used;
  for (const auto& t : n.inputs) {
    validate_tensor(n, t);
    used.insert(t.ranks.begin(), t.ranks.end());
  }
  validate_tensor(n, n.output);
  used.insert(n.output.ranks.begin(), n.output.ranks.end());
  for (const auto& r : n.ranks) {
    if (!used.count(r.name)) {
      throw ValidationError(node_tag(n) + ": rank '" + r.name + "' is not used by any operand");
    }
  }
  for (const auto& r : n.output.ranks) {
    if (n.rank(r).kind == RankKind::contracted) {
      throw ValidationError(node_tag(n) + ": contracted rank '" + r + "' appears in the output");
    }
  }
  if (n.op == OpKind::small_inverse) {
    for (const auto& r : n.ranks) {
      if (r.size >= kSmallRankLimit) {
        throw ValidationError(node_tag(n) + ": small_inverse rank '" + r.name +
                              "' is not below " + std::to_string(kSmallRankLimit));
      }
    }
  }
}

void validate_edge(const TensorDag& dag, TensorEdge& e) {
  const EinsumNode& src = dag.node(e.src);
  const EinsumNode& dest = dag.node(e.dest);
  const std::string tag = "edge " + std::to_string(e.src) + "->" + std::to_string(e.dest);
  if (e.tensor.name.empty()) e.tensor.name = src.output.name;
  if (e.tensor.name != src.output.name) {
    throw ValidationError(tag + ": tensor '" + e.tensor.name + "' is not the output of node " +
                          std::to_string(e.src));
  }
  if (e.tensor.ranks.empty()) {
    e.tensor = src.output;
  } else if (e.tensor.ranks != src.output.ranks) {
    throw RankMismatchError(tag + ": tensor ranks differ from the producer's output");
  }
  e.tensor.sparse = src.output.sparse;
  e.tensor.nnz = src.output.nnz;

  if (e.rank_map.size() != e.tensor.ranks.size()) {
    throw RankMismatchError(tag + ": rank_map does not cover the tensor's ranks");
  }
  std::set<std::string> images;
  std::vector<std::string> mapped;
  for (const auto& r : e.tensor.ranks) {
    auto it = e.rank_map.find(r);
    if (it == e.rank_map.end()) {
      throw RankMismatchError(tag + ": rank_map misses rank '" + r + "'");
    }
    if (!images.insert(it->second).second) {
      throw RankMismatchError(tag + ": rank_map is not injective");
    }
    if (dest.find_rank(it->second) == nullptr) {
      throw RankMismatchError(tag + ": rank_map target '" + it->second +
                              "' is not a rank of the consumer");
    }
    mapped.push_back(it->second);
  }
  const bool consumed = std::any_of(dest.inputs.begin(), dest.inputs.end(), [&](const TensorRef& in) {
    return in.name == e.tensor.name && in.ranks == mapped;
  });
  if (!consumed) {
    throw RankMismatchError(tag + ": consumer has no input '" + e.tensor.name +
                            "' with the mapped ranks");
  }
}

std::vector<int> topological_schedule(const TensorDag& dag) {
  std::map<int, int> indegree;
  for (const auto& n : dag.nodes) indegree[n.id] = 0;
  for (const auto& e : dag.edges) ++indegree[e.dest];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    int id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const auto& e : dag.edges) {
      if (e.src == id && --indegree[e.dest] == 0) ready.push(e.dest);
    }
  }
  if (order.size() != dag.nodes.size()) {
    throw CycleError("tensor dependency graph contains a cycle");
  }
  return order;
}

std::vector<int> longest_path(const TensorDag& dag) {
  // Among successors of equal remaining length the smallest id wins; since
  // candidate sequences then differ in their first element this yields the
  // lexicographically smallest sequence.
  std::map<int, std::size_t> length;
  std::map<int, int> next;
  for (auto it = dag.schedule.rbegin(); it != dag.schedule.rend(); ++it) {
    const int v = *it;
    std::size_t best = 0;
    int best_next = -1;
    bool any = false;
    for (const auto& e : dag.edges) {
      if (e.src != v) continue;
      const std::size_t cand = length[e.dest] + 1;
      if (!any || cand > best || (cand == best && e.dest < best_next)) {
        best = cand;
        best_next = e.dest;
        any = true;
      }
    }
    length[v] = best;
    if (any) next[v] = best_next;
  }
  int start = -1;
  std::size_t best = 0;
  for (const auto& n : dag.nodes) {
    if (start < 0 || length[n.id] > best) {
      start = n.id;
      best = length[n.id];
    }
  }
  std::vector<int> path;
  if (start < 0) return path;
  for (int v = start;;) {
    path.push_back(v);
    auto it = next.find(v);
    if (it == next.end()) break;
    v = it->second;
  }
  return path;
}

}  // namespace

TensorDag build_dag(std::vector<EinsumNode> nodes, std::vector<TensorEdge> edges,
                    std::vector<std::string> outputs) {
  TensorDag dag;
  std::sort(nodes.begin(), nodes.end(),
            [](const EinsumNode& a, const EinsumNode& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      throw ValidationError("duplicate node id " + std::to_string(nodes[i].id));
    }
  }
  for (const auto& n : nodes) validate_node(n);
  dag.nodes = std::move(nodes);

  for (auto& e : edges) {
    if (!dag.has_node(e.src) || !dag.has_node(e.dest)) {
      throw ValidationError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dest) +
                            " references a missing node");
    }
    validate_edge(dag, e);
  }
  dag.edges = std::move(edges);

  if (outputs.empty()) {
    // Default: tensors nobody consumes.
    for (const auto& n : dag.nodes) {
      const bool consumed = std::any_of(dag.edges.begin(), dag.edges.end(),
                                        [&](const TensorEdge& e) { return e.src == n.id; });
      if (!consumed) outputs.push_back(n.output.name);
    }
  } else {
    for (const auto& o : outputs) {
      const bool produced = std::any_of(dag.nodes.begin(), dag.nodes.end(),
                                        [&](const EinsumNode& n) { return n.output.name == o; });
      if (!produced) throw ValidationError("output '" + o + "' is not produced by any node");
    }
  }
  dag.outputs = std::move(outputs);

  dag.schedule = topological_schedule(dag);
  dag.critical_path = longest_path(dag);
  return dag;
}

DominanceClass compute_dominance(const EinsumNode& node) {
  // Only one rank can pass the relative test, but if both kinds ever did the
  // contracted one wins.
  std::optional<const Rank*> uncontracted;
  std::optional<const Rank*> contracted;
  for (const auto& r : node.ranks) {
    if (r.compressed || r.size <= kDominantMinSize) continue;
    bool skewed = true;
    for (const auto& q : node.ranks) {
      if (&q == &r || q.compressed) continue;
      if (r.size <= kDominantRatio * q.size) {
        skewed = false;
        break;
      }
    }
    if (!skewed) continue;
    if (r.kind == RankKind::contracted) {
      if (!contracted) contracted = &r;
    } else if (!uncontracted) {
      uncontracted = &r;
    }
  }
  if (contracted) return {Dominance::C, (*contracted)->name};
  if (uncontracted) return {Dominance::U, (*uncontracted)->name};
  for (const auto& r : node.ranks) {
    if (r.size < kSmallRankLimit) return {Dominance::small, std::nullopt};
  }
  return {Dominance::bal, std::nullopt};
}

void mark_transitive_edges(TensorDag& dag) {
  const std::set<int> on_path(dag.critical_path.begin(), dag.critical_path.end());
  std::set<std::pair<int, int>> path_edges;
  for (std::size_t i = 1; i < dag.critical_path.size(); ++i) {
    path_edges.emplace(dag.critical_path[i - 1], dag.critical_path[i]);
  }
  for (auto& e : dag.edges) {
    e.is_transitive = on_path.count(e.src) && on_path.count(e.dest) &&
                      !path_edges.count({e.src, e.dest});
  }
}

void analyze_structure(TensorDag& dag) {
  for (auto& n : dag.nodes) n.dominance = compute_dominance(n);
  mark_transitive_edges(dag);
}

std::vector<std::size_t> reuse_distances(const TensorDag& dag) {
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < dag.schedule.size(); ++i) pos[dag.schedule[i]] = i;
  std::vector<std::size_t> out;
  out.reserve(dag.edges.size());
  for (const auto& e : dag.edges) out.push_back(pos.at(e.dest) - pos.at(e.src) - 1);
  return out;
}

std::size_t next_use_distance(const TensorDag& dag, int producer, std::size_t pos) {
  std::size_t best = kNoNextUse;
  for (const auto& e : dag.edges) {
    if (e.src != producer) continue;
    const std::size_t p = dag.position(e.dest);
    if (p > pos) best = std::min(best, p - pos - 1);
  }
  return best;
}

std::vector<int> critical_path_segment(const TensorDag& dag, int src, int dest) {
  const auto& cp = dag.critical_path;
  auto a = std::find(cp.begin(), cp.end(), src);
  auto b = std::find(cp.begin(), cp.end(), dest);
  if (a == cp.end() || b == cp.end() || b < a) return {};
  return {a, b + 1};
}

}  // namespace chainflow
