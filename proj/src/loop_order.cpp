// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/loop_order.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "chainflow/errors.hpp"

namespace chainflow {

namespace {

bool is_pipe(const TensorEdge& e) {
  return e.pattern == ReusePattern::pipelineable || e.pattern == ReusePattern::pipeline_with_hold;
}

bool is_swizzle_counted(const TensorEdge& e) {
  return e.pattern == ReusePattern::pipeline_with_writeback ||
         e.pattern == ReusePattern::sequential;
}

LoopOrder producer_projection(const TensorEdge& edge, const LoopOrder& producer_order) {
  LoopOrder out;
  for (const auto& r : producer_order) {
    if (std::find(edge.tensor.ranks.begin(), edge.tensor.ranks.end(), r) != edge.tensor.ranks.end()) {
      out.push_back(r);
    }
  }
  return out;
}

std::string edge_name(const TensorDag& dag, const TensorEdge& e) {
  auto tag = [&](int id) {
    const auto& n = dag.node(id);
    return std::to_string(id) + (n.label.empty() ? "" : "[" + n.label + "]");
  };
  return tag(e.src) + "->" + tag(e.dest) + " (" + e.tensor.name + ")";
}

// Constraints checked when the node at `depth` gets its order; every
// constraint involves only that node and nodes at smaller depths.
struct NodeChecks {
  std::vector<std::size_t> pipe_edges;
  std::vector<std::size_t> swizzle_edges;
  // (edge into this node, earlier sibling edge from the same multicast source)
  std::vector<std::pair<std::size_t, std::size_t>> multicast_pairs;
};

class Search {
 public:
  Search(const TensorDag& dag, std::size_t pipe_edge_limit) : dag_(dag) {
    for (int id : dag.schedule) {
      const auto& n = dag.node(id);
      if (!n.is_mac_like()) continue;
      depth_of_[id] = ordered_.size();
      ordered_.push_back(id);
      candidates_.push_back(candidate_orders(n));
    }
    checks_.resize(ordered_.size());
    std::size_t pipe_seen = 0;
    for (std::size_t i = 0; i < dag.edges.size(); ++i) {
      const auto& e = dag.edges[i];
      if (!depth_of_.count(e.src) || !depth_of_.count(e.dest)) continue;
      const std::size_t d = std::max(depth_of_[e.src], depth_of_[e.dest]);
      if (is_pipe(e)) {
        if (pipe_seen++ < pipe_edge_limit) checks_[d].pipe_edges.push_back(i);
      } else if (is_swizzle_counted(e)) {
        checks_[d].swizzle_edges.push_back(i);
      }
    }
    for (const auto& n : dag.nodes) {
      if (!n.parallel_multicast) continue;
      std::vector<std::size_t> fan;
      for (std::size_t i : dag.out_edges(n.id)) {
        const auto& e = dag.edges[i];
        if (!e.is_transitive && depth_of_.count(e.dest)) fan.push_back(i);
      }
      std::sort(fan.begin(), fan.end(), [&](std::size_t a, std::size_t b) {
        return depth_of_[dag.edges[a].dest] < depth_of_[dag.edges[b].dest];
      });
      for (std::size_t k = 1; k < fan.size(); ++k) {
        checks_[depth_of_[dag.edges[fan[k]].dest]].multicast_pairs.emplace_back(fan[k], fan[0]);
      }
    }
  }

  bool run(std::size_t epsilon) {
    epsilon_ = epsilon;
    choice_.assign(ordered_.size(), 0);
    penalty_.assign(ordered_.size() + 1, 0);
    return descend(0);
  }

  std::map<int, LoopOrder> orders() const {
    std::map<int, LoopOrder> out;
    for (std::size_t d = 0; d < ordered_.size(); ++d) out[ordered_[d]] = order_at(d);
    return out;
  }

  std::size_t penalty() const { return penalty_[ordered_.size()]; }

 private:
  const LoopOrder& order_at(std::size_t d) const { return candidates_[d][choice_[d]]; }
  const LoopOrder& order_of(int id) const { return order_at(depth_of_.at(id)); }

  bool descend(std::size_t d) {
    if (d == ordered_.size()) return true;
    for (std::size_t c = 0; c < candidates_[d].size(); ++c) {
      choice_[d] = c;
      std::size_t added = 0;
      if (!check(d, added)) continue;
      penalty_[d + 1] = penalty_[d] + added;
      if (penalty_[d + 1] > epsilon_) continue;
      if (descend(d + 1)) return true;
    }
    return false;
  }

  bool check(std::size_t d, std::size_t& added) const {
    const auto& ck = checks_[d];
    for (std::size_t i : ck.pipe_edges) {
      const auto& e = dag_.edges[i];
      if (!pipeline_compatible(dag_.node(e.src), e, order_of(e.src), order_of(e.dest))) {
        return false;
      }
    }
    for (const auto& [mine, first] : ck.multicast_pairs) {
      const auto& a = dag_.edges[mine];
      const auto& b = dag_.edges[first];
      if (consumer_projection(a, order_of(a.dest)) != consumer_projection(b, order_of(b.dest))) {
        return false;
      }
    }
    for (std::size_t i : ck.swizzle_edges) {
      const auto& e = dag_.edges[i];
      if (is_swizzled(e, order_of(e.src), order_of(e.dest))) ++added;
    }
    return true;
  }

  const TensorDag& dag_;
  std::vector<int> ordered_;
  std::map<int, std::size_t> depth_of_;
  std::vector<std::vector<LoopOrder>> candidates_;
  std::vector<NodeChecks> checks_;
  std::vector<std::size_t> choice_;
  std::vector<std::size_t> penalty_;
  std::size_t epsilon_ = 0;
};

}  // namespace

LoopOrder consumer_projection(const TensorEdge& edge, const LoopOrder& consumer_order) {
  std::map<std::string, std::string> inverse;
  for (const auto& [p, c] : edge.rank_map) inverse[c] = p;
  LoopOrder out;
  for (const auto& r : consumer_order) {
    auto it = inverse.find(r);
    if (it != inverse.end()) out.push_back(it->second);
  }
  return out;
}

bool is_swizzled(const TensorEdge& edge, const LoopOrder& producer_order,
                 const LoopOrder& consumer_order) {
  return producer_projection(edge, producer_order) != consumer_projection(edge, consumer_order);
}

bool pipeline_compatible(const EinsumNode& producer, const TensorEdge& edge,
                         const LoopOrder& producer_order, const LoopOrder& consumer_order) {
  if (producer_order.empty() || consumer_order.empty()) return false;
  const Rank* outer = producer.find_rank(producer_order.front());
  if (outer == nullptr || outer->kind != RankKind::uncontracted) return false;
  const bool shared = std::any_of(edge.rank_map.begin(), edge.rank_map.end(), [&](const auto& kv) {
    return kv.second == consumer_order.front();
  });
  if (!shared) return false;
  return !is_swizzled(edge, producer_order, consumer_order);
}

std::vector<LoopOrder> candidate_orders(const EinsumNode& node) {
  std::vector<std::size_t> idx(node.ranks.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<LoopOrder> all;
  do {
    LoopOrder o;
    for (std::size_t i : idx) o.push_back(node.ranks[i].name);
    all.push_back(std::move(o));
  } while (std::next_permutation(idx.begin(), idx.end()));
  if (node.dominance.dominant_rank) {
    const auto& dom = *node.dominance.dominant_rank;
    std::stable_partition(all.begin(), all.end(),
                          [&](const LoopOrder& o) { return o.front() == dom; });
  }
  return all;
}

std::vector<std::size_t> default_epsilon_schedule(const TensorDag& dag) {
  std::vector<std::size_t> s(dag.edges.size() + 1);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

LoopOrderAssignment assign_loop_orders(const TensorDag& dag,
                                       std::vector<std::size_t> epsilon_schedule) {
  for (const auto& e : dag.edges) {
    if (!e.pattern) {
      throw MissingAnnotationError("loop-order assignment needs a classified DAG");
    }
  }
  if (epsilon_schedule.empty()) epsilon_schedule = default_epsilon_schedule(dag);
  if (!std::is_sorted(epsilon_schedule.begin(), epsilon_schedule.end())) {
    throw ValidationError("epsilon schedule must be nondecreasing");
  }

  Search search(dag, dag.edges.size());
  LoopOrderAssignment result;
  for (std::size_t eps : epsilon_schedule) {
    if (search.run(eps)) {
      result.orders = search.orders();
      result.swizzle_penalty = search.penalty();
      result.epsilon = eps;
      return result;
    }
    ++result.attempts;
  }

  // Distinguish an over-tight epsilon from hard-constraint infeasibility:
  // add pipeline edges one at a time and report the first that breaks.
  constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);
  if (!Search(dag, dag.edges.size()).run(kUnbounded)) {
    std::size_t pipe_index = 0;
    for (const auto& e : dag.edges) {
      if (!is_pipe(e) || !dag.node(e.src).is_mac_like() || !dag.node(e.dest).is_mac_like()) {
        continue;
      }
      ++pipe_index;
      if (!Search(dag, pipe_index).run(kUnbounded)) {
        throw InfeasibleEdgeError("Loop order doesn't adhere to pipelining: edge " +
                                      edge_name(dag, e) + " can never be pipeline compatible",
                                  e.src, e.dest);
      }
    }
    throw NoAssignmentError("multicast order agreement is unsatisfiable");
  }
  throw NoAssignmentError("no loop-order assignment within swizzle budget " +
                          std::to_string(epsilon_schedule.back()));
}

std::size_t swizzle_penalty(const TensorDag& dag, const std::map<int, LoopOrder>& orders) {
  std::size_t penalty = 0;
  for (const auto& e : dag.edges) {
    if (!is_swizzle_counted(e)) continue;
    auto a = orders.find(e.src);
    auto b = orders.find(e.dest);
    if (a == orders.end() || b == orders.end()) continue;
    if (is_swizzled(e, a->second, b->second)) ++penalty;
  }
  return penalty;
}

bool satisfies_constraints(const TensorDag& dag, const std::map<int, LoopOrder>& orders) {
  for (const auto& e : dag.edges) {
    if (!is_pipe(e)) continue;
    auto a = orders.find(e.src);
    auto b = orders.find(e.dest);
    if (a == orders.end() || b == orders.end()) continue;
    if (!pipeline_compatible(dag.node(e.src), e, a->second, b->second)) return false;
  }
  for (const auto& n : dag.nodes) {
    if (!n.parallel_multicast) continue;
    std::optional<LoopOrder> first;
    for (std::size_t i : dag.out_edges(n.id)) {
      const auto& e = dag.edges[i];
      auto it = orders.find(e.dest);
      if (e.is_transitive || it == orders.end()) continue;
      auto proj = consumer_projection(e, it->second);
      if (!first) {
        first = proj;
      } else if (*first != proj) {
        return false;
      }
    }
  }
  return true;
}

void apply_assignment(TensorDag& dag, const LoopOrderAssignment& assignment) {
  for (auto& n : dag.nodes) {
    auto it = assignment.orders.find(n.id);
    if (it != assignment.orders.end()) {
      n.loop_order = it->second;
    } else {
      n.loop_order.reset();
    }
  }
}

}  // namespace chainflow
