// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/dag_json.hpp"

#include "chainflow/dag.hpp"
#include "chainflow/errors.hpp"

namespace chainflow {

namespace {

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

TensorRef tensor_from_json(const Json& j, const std::string& where) {
  TensorRef t;
  t.name = field<std::string>(j, "name", where);
  t.ranks = field<std::vector<std::string>>(j, "ranks", where);
  if (j.contains("sparse")) t.sparse = field<bool>(j, "sparse", where);
  if (j.contains("nnz") && !j.at("nnz").is_null()) t.nnz = field<std::uint64_t>(j, "nnz", where);
  return t;
}

Json tensor_to_json(const TensorRef& t) {
  Json j;
  j["name"] = t.name;
  j["ranks"] = t.ranks;
  j["sparse"] = t.sparse;
  if (t.nnz) j["nnz"] = *t.nnz;
  return j;
}

}  // namespace

TensorDag dag_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("DAG JSON must be an object");
  std::vector<EinsumNode> nodes;
  std::map<int, std::pair<int, bool>> multicast;
  const Json& jn = j.contains("nodes") ? j.at("nodes") : Json::array();
  if (!jn.is_array() || jn.empty()) throw ValidationError("DAG JSON needs a non-empty 'nodes' array");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const Json& x = jn[i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    EinsumNode n;
    n.id = field<int>(x, "id", where);
    n.op = x.contains("op") ? parse_op_kind(field<std::string>(x, "op", where)) : OpKind::tensor_mac;
    if (x.contains("label")) n.label = field<std::string>(x, "label", where);
    for (const auto& in : field<Json>(x, "inputs", where)) n.inputs.push_back(tensor_from_json(in, where));
    n.output = tensor_from_json(field<Json>(x, "output", where), where + ".output");
    for (const auto& r : field<Json>(x, "ranks", where)) {
      Rank rank;
      rank.name = field<std::string>(r, "name", where);
      rank.size = field<std::uint64_t>(r, "size", where);
      if (r.contains("kind")) rank.kind = parse_rank_kind(field<std::string>(r, "kind", where));
      if (r.contains("compressed")) rank.compressed = field<bool>(r, "compressed", where);
      n.ranks.push_back(rank);
    }
    if (x.contains("parallel_multicast")) {
      multicast[n.id] = {x.value("numcast", 0), field<bool>(x, "parallel_multicast", where)};
    }
    nodes.push_back(std::move(n));
  }
  std::vector<TensorEdge> edges;
  std::vector<std::optional<ReusePattern>> patterns;
  if (j.contains("edges")) {
    const Json& je = j.at("edges");
    if (!je.is_array()) throw ValidationError("'edges' must be an array");
    for (std::size_t i = 0; i < je.size(); ++i) {
      const Json& x = je[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      TensorEdge e;
      e.src = field<int>(x, "src", where);
      e.dest = field<int>(x, "dest", where);
      if (x.contains("tensor")) {
        const Json& t = x.at("tensor");
        if (t.is_string()) {
          e.tensor.name = t.get<std::string>();
        } else {
          e.tensor = tensor_from_json(t, where + ".tensor");
        }
      }
      e.rank_map = field<std::map<std::string, std::string>>(x, "rank_map", where);
      patterns.push_back(x.contains("pattern")
                             ? std::optional(parse_reuse_pattern(field<std::string>(x, "pattern", where)))
                             : std::nullopt);
      edges.push_back(std::move(e));
    }
  }
  std::vector<std::string> outputs;
  if (j.contains("outputs")) outputs = field<std::vector<std::string>>(j, "outputs", "DAG");

  TensorDag dag = build_dag(std::move(nodes), std::move(edges), std::move(outputs));
  analyze_structure(dag);
  for (std::size_t i = 0; i < patterns.size(); ++i) dag.edges[i].pattern = patterns[i];
  for (const auto& [id, mc] : multicast) {
    dag.node(id).numcast = mc.first;
    dag.node(id).parallel_multicast = mc.second;
  }
  return dag;
}

TensorDag parse_dag_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed DAG JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return dag_from_json(j);
}

bool fully_classified(const TensorDag& dag) {
  for (const auto& e : dag.edges) {
    if (!e.pattern) return false;
  }
  return true;
}

Json dag_to_json(const TensorDag& dag, bool annotated) {
  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : dag.nodes) {
    Json x;
    x["id"] = n.id;
    x["op"] = to_string(n.op);
    if (!n.label.empty()) x["label"] = n.label;
    x["inputs"] = Json::array();
    for (const auto& in : n.inputs) x["inputs"].push_back(tensor_to_json(in));
    x["output"] = tensor_to_json(n.output);
    x["ranks"] = Json::array();
    for (const auto& r : n.ranks) {
      x["ranks"].push_back(
          {{"name", r.name}, {"size", r.size}, {"kind", to_string(r.kind)}, {"compressed", r.compressed}});
    }
    if (annotated) {
      x["dominance"] = to_string(n.dominance.kind);
      x["dominant_rank"] = n.dominance.dominant_rank ? Json(*n.dominance.dominant_rank) : Json();
      x["numcast"] = n.numcast;
      x["parallel_multicast"] = n.parallel_multicast;
      if (n.loop_order) x["loop_order"] = *n.loop_order;
    }
    j["nodes"].push_back(std::move(x));
  }
  j["edges"] = Json::array();
  for (const auto& e : dag.edges) {
    Json x;
    x["src"] = e.src;
    x["dest"] = e.dest;
    x["tensor"] = e.tensor.name;
    Json map = Json::object();
    for (const auto& [p, c] : e.rank_map) map[p] = c;
    x["rank_map"] = map;
    if (annotated) {
      x["is_transitive"] = e.is_transitive;
      if (e.pattern) x["pattern"] = to_string(*e.pattern);
    }
    j["edges"].push_back(std::move(x));
  }
  j["outputs"] = dag.outputs;
  if (annotated) {
    j["schedule"] = dag.schedule;
    j["critical_path"] = dag.critical_path;
    j["diagnostics"] = dag.diagnostics;
  }
  return j;
}

Json assignment_to_json(const LoopOrderAssignment& a) {
  Json j = Json::object();
  for (const auto& [id, order] : a.orders) j[std::to_string(id)] = order;
  j["penalty"] = a.swizzle_penalty;
  j["attempts"] = a.attempts;
  return j;
}

Json trace_to_json(const CgTrace& t) {
  Json j;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["residual_norms"] = t.residual_norms;
  j["macs"] = t.macs;
  j["X"] = {{"rows", t.X.rows}, {"cols", t.X.cols}, {"values", t.X.values}};
  return j;
}

Json report_to_json(const TrafficReport& r, std::uint64_t word_bytes) {
  Json j;
  j["policy"] = to_string(r.policy);
  j["dram_read_words"] = r.dram_read_words;
  j["dram_write_words"] = r.dram_write_words;
  j["dram_bytes"] = r.dram_bytes;
  j["noc_intercluster_words"] = r.noc_intercluster_words;
  j["sram_peak_words"] = r.sram_peak_words;
  j["word_bytes"] = word_bytes;
  j["per_node"] = Json::array();
  for (const auto& n : r.per_node) {
    j["per_node"].push_back({{"node", n.node},
                             {"label", n.label},
                             {"dram_read_words", n.dram_read_words},
                             {"dram_write_words", n.dram_write_words},
                             {"eliminated_read_words", n.eliminated_read_words},
                             {"eliminated_write_words", n.eliminated_write_words}});
  }
  return j;
}

}  // namespace chainflow
