// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/reuse.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "chainflow/dag.hpp"
#include "chainflow/errors.hpp"

namespace chainflow {

namespace {

std::string edge_tag(const TensorDag& dag, const TensorEdge& e) {
  const auto& s = dag.node(e.src);
  const auto& d = dag.node(e.dest);
  std::ostringstream os;
  os << e.src;
  if (!s.label.empty()) os << "[" << s.label << "]";
  os << "->" << e.dest;
  if (!d.label.empty()) os << "[" << d.label << "]";
  os << " " << e.tensor.name;
  return os.str();
}

// The consumer's dominant rank is not carried by the shared tensor.
bool dest_dominant_rank_unshared(const TensorDag& dag, const TensorEdge& e) {
  const auto& dom = dag.node(e.dest).dominance;
  if (!dom.dominant_rank) return false;
  return std::none_of(e.rank_map.begin(), e.rank_map.end(),
                      [&](const auto& kv) { return kv.second == *dom.dominant_rank; });
}

}  // namespace

void classify(TensorDag& dag) {
  dag.diagnostics.clear();
  for (auto& e : dag.edges) e.pattern.reset();

  for (int id : dag.schedule) {
    EinsumNode& node = dag.node(id);
    node.numcast = 0;
    node.parallel_multicast = false;
    const bool contracted = node.dominance.kind == Dominance::C;

    for (std::size_t idx : dag.out_edges(id)) {
      TensorEdge& e = dag.edges[idx];
      std::vector<ReusePattern> trail;
      auto assign = [&](ReusePattern p) {
        trail.push_back(p);
        e.pattern = p;
      };

      if (!e.is_transitive) {
        if (++node.numcast > 1) node.parallel_multicast = true;
      }
      if (!contracted && !e.is_transitive) assign(ReusePattern::pipelineable);
      if (contracted || !node.is_mac_like()) assign(ReusePattern::sequential);
      if (dest_dominant_rank_unshared(dag, e)) assign(ReusePattern::sequential);
      if (!contracted && e.is_transitive) {
        const auto segment = critical_path_segment(dag, e.src, e.dest);
        const bool through_contraction = std::any_of(segment.begin(), segment.end(), [&](int n) {
          return dag.node(n).dominance.kind == Dominance::C;
        });
        assign(through_contraction ? ReusePattern::pipeline_with_writeback
                                   : ReusePattern::pipeline_with_hold);
      }

      if (!e.pattern) {
        throw UnclassifiedError("edge " + edge_tag(dag, e) + " received no reuse pattern");
      }
      for (std::size_t i = 1; i < trail.size(); ++i) {
        if (trail[i] != trail[i - 1]) {
          std::string msg = "edge " + edge_tag(dag, e) + ":";
          for (auto p : trail) msg += " " + std::string(to_string(p));
          dag.diagnostics.push_back(std::move(msg));
          break;
        }
      }
    }
  }
}

std::string pattern_table(const TensorDag& dag) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "edge" << std::setw(12) << "tensor" << std::setw(12)
     << "transitive" << "pattern\n";
  for (const auto& e : dag.edges) {
    const auto& s = dag.node(e.src);
    const auto& d = dag.node(e.dest);
    std::string name = (s.label.empty() ? std::to_string(e.src) : s.label) + "->" +
                       (d.label.empty() ? std::to_string(e.dest) : d.label);
    os << std::setw(14) << name << std::setw(12) << e.tensor.name << std::setw(12)
       << (e.is_transitive ? "yes" : "no")
       << (e.pattern ? to_string(*e.pattern) : std::string_view("-")) << "\n";
  }
  return os.str();
}

std::string to_dot(const TensorDag& dag) {
  std::ostringstream os;
  os << "digraph chain {\n  rankdir=LR;\n";
  for (int id : dag.schedule) {
    const auto& n = dag.node(id);
    os << "  n" << id << " [label=\"" << (n.label.empty() ? std::to_string(id) : n.label)
       << "\\n" << to_string(n.dominance.kind) << "\"";
    if (n.op == OpKind::small_inverse) os << " shape=box";
    os << "];\n";
  }
  for (const auto& e : dag.edges) {
    std::string colour = "black";
    if (dag.node(e.src).parallel_multicast && !e.is_transitive) {
      colour = "green";
    } else if (e.pattern) {
      switch (*e.pattern) {
        case ReusePattern::pipelineable: colour = "blue"; break;
        case ReusePattern::pipeline_with_writeback: colour = "#B6321C"; break;
        case ReusePattern::pipeline_with_hold: colour = "cyan"; break;
        case ReusePattern::sequential: break;
      }
    }
    os << "  n" << e.src << " -> n" << e.dest << " [label=\"" << e.tensor.name
       << "\" color=\"" << colour << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace chainflow
