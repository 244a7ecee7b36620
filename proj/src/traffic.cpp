// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "chainflow/dag.hpp"
#include "chainflow/errors.hpp"

namespace chainflow {

void MachineConfig::validate() const {
  if (clusters == 0 || pes_per_cluster == 0 || word_bytes == 0) {
    throw ValidationError("machine config: clusters, PEs and word size must be positive");
  }
}

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::seq_flex: return "seq_flex";
    case Policy::seq_overflow: return "seq_overflow";
    case Policy::gogeta_df: return "gogeta_df";
    case Policy::gogeta_map: return "gogeta_map";
    case Policy::ideal: return "ideal";
  }
  return "?";
}

Policy parse_policy(std::string_view s) {
  for (Policy p : all_policies()) {
    if (to_string(p) == s) return p;
  }
  throw ValidationError("unknown policy '" + std::string(s) + "'");
}

const std::vector<Policy>& all_policies() {
  static const std::vector<Policy> v = {Policy::seq_flex, Policy::seq_overflow, Policy::gogeta_df,
                                        Policy::gogeta_map, Policy::ideal};
  return v;
}

namespace {

bool is_gogeta(Policy p) { return p == Policy::gogeta_df || p == Policy::gogeta_map; }

void require_annotations(const TensorDag& dag, const LoopOrderAssignment* assignment) {
  for (const auto& e : dag.edges) {
    if (!e.pattern) throw MissingAnnotationError("gogeta policies need a classified DAG");
  }
  if (assignment == nullptr) throw MissingAnnotationError("gogeta policies need loop orders");
}

const LoopOrder* order_of(const LoopOrderAssignment& a, int id) {
  auto it = a.orders.find(id);
  return it == a.orders.end() ? nullptr : &it->second;
}

// Slice of the intermediate along the producer's outermost loop rank.
Words slice_words(const TensorDag& dag, const TensorEdge& e, const LoopOrder& producer_order,
                  const TrafficOptions& opt) {
  const auto& src = dag.node(e.src);
  const Words total = tensor_words(src, e.tensor, opt.values_only);
  const auto& outer = producer_order.front();
  if (std::find(e.tensor.ranks.begin(), e.tensor.ranks.end(), outer) == e.tensor.ranks.end()) {
    return total;
  }
  return std::max<Words>(1, total / src.rank(outer).size);
}

}  // namespace

std::vector<std::size_t> realized_pipelined_edges(const TensorDag& dag,
                                                  const LoopOrderAssignment& assignment,
                                                  const MachineConfig& config,
                                                  const TrafficOptions& opt) {
  const auto dist = reuse_distances(dag);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dag.edges.size(); ++i) {
    const auto& e = dag.edges[i];
    if (e.pattern != ReusePattern::pipelineable && e.pattern != ReusePattern::pipeline_with_hold) {
      continue;
    }
    const auto& src = dag.node(e.src);
    const auto& dst = dag.node(e.dest);
    if (!src.is_mac_like() || !dst.is_mac_like()) continue;
    const LoopOrder* po = order_of(assignment, e.src);
    const LoopOrder* co = order_of(assignment, e.dest);
    if (po == nullptr || co == nullptr || !pipeline_compatible(src, e, *po, *co)) continue;
    if (e.pattern == ReusePattern::pipelineable) {
      if (dist[i] != 0) continue;
    } else {
      const Words hold = slice_words(dag, e, *po, opt) * (dist[i] + 1);
      if (hold > config.rf_words() && hold > config.sram_words()) continue;
    }
    out.push_back(i);
  }
  return out;
}

std::size_t plan_next_use(const TrafficPlan& plan, const std::string& tensor, std::size_t pos) {
  auto it = plan.read_positions.find(tensor);
  if (it == plan.read_positions.end()) return kNoNextUse;
  auto q = std::upper_bound(it->second.begin(), it->second.end(), pos);
  if (q == it->second.end()) return kNoNextUse;
  return *q - pos - 1;
}

TrafficPlan build_plan(const TensorDag& dag, const LoopOrderAssignment* assignment,
                       const MachineConfig& config, Policy policy, const TrafficOptions& opt) {
  if (policy == Policy::ideal) throw ValidationError("the ideal policy has no plan");
  const bool gogeta = is_gogeta(policy);
  if (gogeta) require_annotations(dag, assignment);

  TrafficPlan plan;
  plan.distance_eviction = gogeta;
  plan.outputs = dag.outputs;

  std::set<std::size_t> realized;
  if (gogeta) {
    for (auto i : realized_pipelined_edges(dag, *assignment, config, opt)) realized.insert(i);
  }

  // (consumer, tensor) pairs whose read rides on an earlier sibling's read.
  std::set<std::pair<int, std::string>> shared;
  if (gogeta) {
    for (const auto& n : dag.nodes) {
      if (!n.parallel_multicast) continue;
      std::vector<std::size_t> fan;
      for (auto i : dag.out_edges(n.id)) {
        if (!dag.edges[i].is_transitive) fan.push_back(i);
      }
      std::sort(fan.begin(), fan.end(), [&](std::size_t a, std::size_t b) {
        return dag.position(dag.edges[a].dest) < dag.position(dag.edges[b].dest);
      });
      bool paid = false;
      for (std::size_t k = 0; k < fan.size(); ++k) {
        const auto& e = dag.edges[fan[k]];
        if (k > 0 && dag.position(e.dest) != dag.position(dag.edges[fan[k - 1]].dest) + 1) {
          paid = false;
        }
        if (realized.count(fan[k])) continue;
        if (paid) {
          shared.emplace(e.dest, e.tensor.name);
        } else {
          paid = true;
        }
      }
    }
  }

  std::set<std::string> produced;
  for (const auto& n : dag.nodes) produced.insert(n.output.name);

  std::map<int, std::vector<std::string>> releases_at;
  std::map<std::string, std::size_t> produced_at;
  for (std::size_t s = 0; s < dag.schedule.size(); ++s) {
    const auto& n = dag.node(dag.schedule[s]);
    PlanStep step;
    step.node = n.id;

    std::set<std::string> seen;
    for (const auto& in : n.inputs) {
      if (!seen.insert(in.name).second) continue;
      const Words w = tensor_words(n, in, opt.values_only);
      plan.sizes.emplace(in.name, w);
      if (!produced.count(in.name) &&
          std::find(plan.inputs.begin(), plan.inputs.end(), in.name) == plan.inputs.end()) {
        plan.inputs.push_back(in.name);
      }
      bool skip = shared.count({n.id, in.name}) > 0;
      for (auto i : dag.in_edges(n.id)) {
        if (dag.edges[i].tensor.name == in.name && realized.count(i)) skip = true;
      }
      if (skip) {
        step.eliminated_read_words += w;
      } else {
        step.reads.push_back({in.name, w});
        plan.read_positions[in.name].push_back(s);
      }
    }

    const Words out_words = tensor_words(n, n.output, opt.values_only);
    plan.sizes.emplace(n.output.name, out_words);
    const auto outs = dag.out_edges(n.id);
    const bool pipelined_away =
        gogeta && !outs.empty() && !dag.is_output(n.output.name) &&
        std::all_of(outs.begin(), outs.end(), [&](std::size_t i) { return realized.count(i) > 0; });
    if (pipelined_away) {
      step.eliminated_write_words = out_words;
    } else {
      step.produce = PlanRead{n.output.name, out_words};
      produced_at[n.output.name] = s;
    }

    for (auto i : outs) {
      const auto& e = dag.edges[i];
      if (!realized.count(i) || e.pattern != ReusePattern::pipeline_with_hold) continue;
      const LoopOrder& po = assignment->orders.at(e.src);
      const Words hold = slice_words(dag, e, po, opt) * (dag.position(e.dest) - s);
      if (hold <= config.rf_words()) continue;
      const std::string name = "hold:" + e.tensor.name + "->" + std::to_string(e.dest);
      step.reserves.push_back({name, hold});
      releases_at[e.dest].push_back(name);
    }
    plan.steps.push_back(std::move(step));
  }

  for (auto& step : plan.steps) {
    auto it = releases_at.find(step.node);
    if (it != releases_at.end()) step.releases = it->second;
  }

  // A tensor leaves SRAM after its last read; a produced tensor nobody reads
  // leaves one step after production. Outputs stay until the final flush.
  std::map<std::size_t, std::vector<std::string>> frees;
  for (const auto& [t, size] : plan.sizes) {
    if (dag.is_output(t)) continue;
    auto r = plan.read_positions.find(t);
    if (r != plan.read_positions.end()) {
      frees[r->second.back()].push_back(t);
    } else if (auto p = produced_at.find(t); p != produced_at.end()) {
      if (p->second + 1 < plan.steps.size()) frees[p->second + 1].push_back(t);
    }
  }
  for (auto& [s, ts] : frees) plan.steps[s].frees = std::move(ts);
  return plan;
}

namespace {

struct Slot {
  Words size = 0;
  Words r = 0;  // resident prefix
  Words b = 0;  // words at index >= b are valid in DRAM
  std::uint64_t age = 0;
  bool has_age = false;
  int producer = -1;
};

class Sram {
 public:
  Sram(const TrafficPlan& plan, Words capacity) : plan_(plan), capacity_(capacity) {}

  Words free() const { return capacity_ - used_; }
  Words peak() const { return peak_; }

  void add_input(const std::string& t, Words size) { slots_[t] = Slot{size, 0, 0, 0, false, -1}; }

  // Returns DRAM words read.
  Words read(const std::string& t) {
    Slot& s = slots_.at(t);
    const Words miss = s.size - s.r;
    const Words install = std::min(free(), miss);
    if (install > 0) {
      s.r += install;
      used_ += install;
      stamp(s);
    }
    note_peak();
    return miss;
  }

  void drop(const std::string& t) {
    auto it = slots_.find(t);
    if (it == slots_.end()) return;
    used_ -= it->second.r;
    it->second.r = 0;
  }

  // Returns DRAM words written.
  Words produce(const std::string& t, Words size, int producer, std::size_t pos) {
    Slot& s = slots_[t];
    s = Slot{size, 0, size, 0, false, producer};
    stamp(s);
    Words remaining = size;
    Words writes = 0;
    const Words place = std::min(free(), remaining);
    s.r += place;
    used_ += place;
    remaining -= place;
    if (remaining > 0 && plan_.distance_eviction) {
      for (const std::string& v : victims(t, pos)) {
        if (v == t) break;
        Slot& vs = slots_.at(v);
        const Words ev = std::min(vs.r, remaining);
        writes += evict(vs, ev);
        s.r += ev;
        used_ += ev;
        remaining -= ev;
        if (remaining == 0) break;
      }
    }
    if (remaining > 0) {
      writes += remaining;
      s.b = s.r;
    }
    note_peak();
    return writes;
  }

  // Returns DRAM words written by evictions.
  Words reserve(const std::string& h, Words words, std::size_t pos) {
    Words writes = 0;
    if (free() < words && plan_.distance_eviction) {
      for (const std::string& v : victims("", pos)) {
        Slot& vs = slots_.at(v);
        writes += evict(vs, std::min(vs.r, words - free()));
        if (free() >= words) break;
      }
    }
    const Words got = std::min(words, free());
    holds_[h] = got;
    used_ += got;
    note_peak();
    return writes;
  }

  void release(const std::string& h) {
    auto it = holds_.find(h);
    if (it == holds_.end()) return;
    used_ -= it->second;
    holds_.erase(it);
  }

  // Unbacked resident words of `t`.
  Words flush(const std::string& t) {
    auto it = slots_.find(t);
    if (it == slots_.end()) return 0;
    return std::min(it->second.r, it->second.b);
  }

  int producer_of(const std::string& t) const {
    auto it = slots_.find(t);
    return it == slots_.end() ? -1 : it->second.producer;
  }

 private:
  void stamp(Slot& s) {
    if (!s.has_age && (s.r > 0 || s.producer >= 0)) {
      s.age = clock_++;
      s.has_age = true;
    }
  }

  void note_peak() { peak_ = std::max(peak_, used_); }

  Words evict(Slot& v, Words n) {
    const Words new_r = v.r - n;
    const Words unbacked_end = std::min(v.r, v.b);
    const Words writes = unbacked_end > new_r ? unbacked_end - new_r : 0;
    v.b = std::min(v.b, new_r);
    v.r = new_r;
    used_ -= n;
    return writes;
  }

  // Eviction order: farthest next use, then larger, then older. `self` is
  // the producing tensor and competes with zero resident words.
  std::vector<std::string> victims(const std::string& self, std::size_t pos) const {
    struct Cand {
      std::string name;
      std::size_t dist;
      Words size;
      std::uint64_t age;
    };
    std::vector<Cand> c;
    for (const auto& [name, s] : slots_) {
      if (name != self && s.r == 0) continue;
      c.push_back({name, plan_next_use(plan_, name, pos), s.size, s.age});
    }
    std::sort(c.begin(), c.end(), [](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist > b.dist;
      if (a.size != b.size) return a.size > b.size;
      return a.age < b.age;
    });
    std::vector<std::string> out;
    for (auto& x : c) out.push_back(std::move(x.name));
    return out;
  }

  const TrafficPlan& plan_;
  Words capacity_;
  Words used_ = 0;
  Words peak_ = 0;
  std::uint64_t clock_ = 0;
  std::map<std::string, Slot> slots_;
  std::map<std::string, Words> holds_;
};

}  // namespace

TrafficReport execute_plan(const TensorDag& dag, const TrafficPlan& plan, Words capacity) {
  TrafficReport rep;
  Sram sram(plan, capacity);
  for (const auto& t : plan.inputs) sram.add_input(t, plan.sizes.at(t));
  std::map<int, std::size_t> row;
  for (std::size_t s = 0; s < plan.steps.size(); ++s) {
    const auto& step = plan.steps[s];
    const auto& n = dag.node(step.node);
    NodeTraffic nt{n.id, n.label, 0, 0, step.eliminated_read_words, step.eliminated_write_words};
    for (const auto& r : step.reads) nt.dram_read_words += sram.read(r.tensor);
    for (const auto& h : step.releases) sram.release(h);
    for (const auto& t : step.frees) sram.drop(t);
    if (step.produce) {
      nt.dram_write_words += sram.produce(step.produce->tensor, step.produce->words, n.id, s);
    }
    for (const auto& h : step.reserves) nt.dram_write_words += sram.reserve(h.name, h.words, s);
    row[n.id] = rep.per_node.size();
    rep.per_node.push_back(nt);
  }
  for (const auto& t : plan.outputs) {
    const Words w = sram.flush(t);
    const int p = sram.producer_of(t);
    if (w > 0 && p >= 0) rep.per_node[row.at(p)].dram_write_words += w;
  }
  for (const auto& nt : rep.per_node) {
    rep.dram_read_words += nt.dram_read_words;
    rep.dram_write_words += nt.dram_write_words;
  }
  rep.sram_peak_words = sram.peak();
  return rep;
}

namespace {

TrafficReport simulate_ideal(const TensorDag& dag, const TrafficOptions& opt) {
  TrafficReport rep;
  std::set<std::string> produced;
  for (const auto& n : dag.nodes) produced.insert(n.output.name);
  std::set<std::string> counted;
  for (int id : dag.schedule) {
    const auto& n = dag.node(id);
    NodeTraffic nt{n.id, n.label, 0, 0, 0, 0};
    for (const auto& in : n.inputs) {
      if (!produced.count(in.name) && counted.insert(in.name).second) {
        nt.dram_read_words += tensor_words(n, in, opt.values_only);
      }
    }
    if (dag.is_output(n.output.name)) {
      nt.dram_write_words += tensor_words(n, n.output, opt.values_only);
    }
    rep.dram_read_words += nt.dram_read_words;
    rep.dram_write_words += nt.dram_write_words;
    rep.per_node.push_back(nt);
  }
  return rep;
}

bool small_tensor(const EinsumNode& n, const TensorRef& t) {
  return std::all_of(t.ranks.begin(), t.ranks.end(),
                     [&](const std::string& r) { return n.rank(r).size <= kDominantMinSize; });
}

// Small operands a sliced node must broadcast (inputs) or reduce (output)
// across clusters, keyed by tensor so shared ones are charged once.
void map_charges(const TensorDag& dag, const LoopOrderAssignment& assignment, int id,
                 const TrafficOptions& opt, std::map<std::string, Words>& charged) {
  const auto& n = dag.node(id);
  const std::string cut = sliced_rank(n, assignment);
  auto consider = [&](const TensorRef& t) {
    if (std::find(t.ranks.begin(), t.ranks.end(), cut) != t.ranks.end()) return;
    if (!small_tensor(n, t)) return;
    charged.emplace(t.name, tensor_words(n, t, opt.values_only));
  };
  for (const auto& in : n.inputs) consider(in);
  consider(n.output);
}

}  // namespace

std::string sliced_rank(const EinsumNode& node, const LoopOrderAssignment& assignment) {
  if (node.dominance.dominant_rank) return *node.dominance.dominant_rank;
  if (const LoopOrder* o = order_of(assignment, node.id); o != nullptr && !o->empty()) {
    return o->front();
  }
  return node.ranks.front().name;
}

Words noc_traversals(const TensorDag& dag, const LoopOrderAssignment& assignment,
                     const MachineConfig& config, Policy policy, const TrafficOptions& opt) {
  if (!is_gogeta(policy) || config.clusters <= 1) return 0;
  const auto realized = realized_pipelined_edges(dag, assignment, config, opt);
  if (policy == Policy::gogeta_df) {
    std::set<std::size_t> moved(realized.begin(), realized.end());
    for (std::size_t i = 0; i < dag.edges.size(); ++i) {
      const auto& e = dag.edges[i];
      if (e.pattern == ReusePattern::pipeline_with_writeback && dag.node(e.src).is_mac_like() &&
          dag.node(e.dest).is_mac_like()) {
        moved.insert(i);
      }
    }
    Words w = 0;
    for (auto i : moved) w += tensor_words(dag.node(dag.edges[i].src), dag.edges[i].tensor, opt.values_only);
    return w;
  }
  std::set<int> sliced;
  for (auto i : realized) {
    sliced.insert(dag.edges[i].src);
    sliced.insert(dag.edges[i].dest);
  }
  std::map<std::string, Words> charged;
  for (int id : sliced) map_charges(dag, assignment, id, opt, charged);
  Words w = 0;
  for (const auto& [t, words] : charged) w += words * (config.clusters - 1);
  return w;
}

Words noc_pair(const TensorDag& dag, const LoopOrderAssignment& assignment,
               const MachineConfig& config, Policy policy, int src, int dest,
               const TrafficOptions& opt) {
  if (!is_gogeta(policy) || config.clusters <= 1) return 0;
  if (policy == Policy::gogeta_df) {
    Words w = 0;
    for (const auto& e : dag.edges) {
      if (e.src == src && e.dest == dest) w += tensor_words(dag.node(src), e.tensor, opt.values_only);
    }
    return w;
  }
  std::map<std::string, Words> charged;
  map_charges(dag, assignment, src, opt, charged);
  map_charges(dag, assignment, dest, opt, charged);
  Words w = 0;
  for (const auto& [t, words] : charged) w += words * (config.clusters - 1);
  return w;
}

TrafficReport simulate(const TensorDag& dag, const LoopOrderAssignment* assignment,
                       const MachineConfig& config, Policy policy, const TrafficOptions& opt) {
  config.validate();
  TrafficReport rep;
  if (policy == Policy::ideal) {
    rep = simulate_ideal(dag, opt);
  } else {
    const TrafficPlan plan = build_plan(dag, assignment, config, policy, opt);
    rep = execute_plan(dag, plan, policy == Policy::seq_flex ? 0 : config.sram_words());
    if (is_gogeta(policy)) {
      rep.noc_intercluster_words = noc_traversals(dag, *assignment, config, policy, opt);
    }
  }
  rep.policy = policy;
  rep.dram_bytes = rep.dram_words() * config.word_bytes;
  return rep;
}

}  // namespace chainflow
