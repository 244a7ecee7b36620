// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "chainflow/dag.hpp"
#include "chainflow/reuse.hpp"

namespace chainflow::testing {

Rank U(const std::string& name, std::uint64_t size) {
  return Rank{name, size, RankKind::uncontracted, false};
}

Rank C(const std::string& name, std::uint64_t size, bool compressed) {
  return Rank{name, size, RankKind::contracted, compressed};
}

TensorRef T(const std::string& name, std::vector<std::string> ranks) {
  TensorRef t;
  t.name = name;
  t.ranks = std::move(ranks);
  return t;
}

EinsumNode make_node(int id, std::vector<Rank> ranks, std::vector<TensorRef> inputs,
                     TensorRef output, OpKind op, std::string label) {
  EinsumNode n;
  n.id = id;
  n.op = op;
  n.ranks = std::move(ranks);
  n.inputs = std::move(inputs);
  n.output = std::move(output);
  n.label = std::move(label);
  return n;
}

TensorEdge make_edge(int src, int dest, RankMap map) {
  TensorEdge e;
  e.src = src;
  e.dest = dest;
  e.rank_map = std::move(map);
  return e;
}

EinsumNode gemm_node(int id, std::uint64_t M, std::uint64_t K, std::uint64_t N,
                     const std::string& a, const std::string& b, const std::string& z) {
  return make_node(id, {U("m", M), C("k", K), U("n", N)}, {T(a, {"m", "k"}), T(b, {"k", "n"})},
                   T(z, {"m", "n"}));
}

TensorDag resnet_chain() {
  const std::uint64_t M = 100000;
  std::vector<EinsumNode> nodes;
  nodes.push_back(make_node(0, {U("m", M), C("k", 8), U("n", 8)},
                            {T("X", {"m", "k"}), T("W0", {"k", "n"})}, T("Y0", {"m", "n"})));
  nodes.push_back(make_node(1, {U("m", M), C("k", 8), U("n", 8)},
                            {T("Y0", {"m", "k"}), T("W1", {"k", "n"})}, T("Y1", {"m", "n"})));
  // Residual add folded into the MAC as an extra operand.
  nodes.push_back(make_node(2, {U("m", M), C("k", 8), U("n", 8)},
                            {T("Y1", {"m", "k"}), T("W2", {"k", "n"}), T("Y0", {"m", "n"})},
                            T("Y2", {"m", "n"})));
  std::vector<TensorEdge> edges = {make_edge(0, 1, {{"m", "m"}, {"n", "k"}}),
                                   make_edge(1, 2, {{"m", "m"}, {"n", "k"}}),
                                   make_edge(0, 2, {{"m", "m"}, {"n", "n"}})};
  auto dag = build_dag(std::move(nodes), std::move(edges));
  analyze_structure(dag);
  return dag;
}

TensorDag forced_swizzle_dag() {
  // 0: S[m,n] = A[m,k] B[k,n]   (U, m dominant)
  // 1: D[a,n] = P[kk,a] S[kk,n] Q[kk]   (C on kk)
  // 2: X[m,j,w] = S[m,n] D[n,j] V[n] G[w]   (no dominant rank)
  // 3: V[t],  4: Q[u]
  // Q pins node 1 kk-outermost, so S flows m-major; V pins node 2
  // n-outermost, so the writeback skip 0->2 must be swizzled.
  std::vector<EinsumNode> nodes;
  nodes.push_back(make_node(0, {U("m", 5000), C("k", 6), U("n", 4)},
                            {T("A", {"m", "k"}), T("B", {"k", "n"})}, T("S", {"m", "n"})));
  nodes.push_back(make_node(1, {C("kk", 5000), U("a", 4), U("n", 4)},
                            {T("P", {"kk", "a"}), T("S", {"kk", "n"}), T("Q", {"kk"})},
                            T("D", {"a", "n"})));
  nodes.push_back(make_node(2, {U("m", 5000), C("n", 4), U("j", 4), U("w", 60)},
                            {T("S", {"m", "n"}), T("D", {"n", "j"}), T("V", {"n"}), T("G", {"w"})},
                            T("X", {"m", "j", "w"})));
  nodes.push_back(make_node(3, {U("t", 4)}, {T("E", {"t"})}, T("V", {"t"})));
  nodes.push_back(make_node(4, {U("u", 5000)}, {T("F", {"u"})}, T("Q", {"u"})));
  std::vector<TensorEdge> edges = {
      make_edge(0, 1, {{"m", "kk"}, {"n", "n"}}), make_edge(0, 2, {{"m", "m"}, {"n", "n"}}),
      make_edge(1, 2, {{"a", "n"}, {"n", "j"}}),  make_edge(3, 2, {{"t", "n"}}),
      make_edge(4, 1, {{"u", "kk"}})};
  auto dag = build_dag(std::move(nodes), std::move(edges));
  analyze_structure(dag);
  return dag;
}

TensorDag infeasible_pipeline_dag() {
  // Two pipelineable inputs into node 2, but node 2's outermost rank can be
  // shared with only one of them.
  std::vector<EinsumNode> nodes;
  nodes.push_back(make_node(0, {U("i", 8)}, {T("A", {"i"})}, T("U0", {"i"})));
  nodes.push_back(make_node(1, {U("j", 8)}, {T("B", {"j"})}, T("V1", {"j"})));
  nodes.push_back(make_node(2, {U("x", 8), U("y", 8)}, {T("U0", {"x"}), T("V1", {"y"})},
                            T("O", {"x", "y"})));
  std::vector<TensorEdge> edges = {make_edge(0, 2, {{"i", "x"}}), make_edge(1, 2, {{"j", "y"}})};
  auto dag = build_dag(std::move(nodes), std::move(edges));
  analyze_structure(dag);
  return dag;
}

// ---- loop-order oracle ----------------------------------------------------

std::optional<LoopOrderAssignment> brute_force_assign(const TensorDag& dag,
                                                      const std::vector<std::size_t>& eps) {
  std::vector<int> ids;
  std::vector<std::vector<LoopOrder>> cands;
  for (int id : dag.schedule) {
    if (!dag.node(id).is_mac_like()) continue;
    ids.push_back(id);
    cands.push_back(candidate_orders(dag.node(id)));
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    std::vector<std::size_t> digit(ids.size(), 0);
    while (true) {
      std::map<int, LoopOrder> orders;
      for (std::size_t d = 0; d < ids.size(); ++d) orders[ids[d]] = cands[d][digit[d]];
      if (satisfies_constraints(dag, orders)) {
        const std::size_t pen = swizzle_penalty(dag, orders);
        if (pen <= eps[k]) {
          LoopOrderAssignment a;
          a.orders = std::move(orders);
          a.swizzle_penalty = pen;
          a.attempts = k;
          a.epsilon = eps[k];
          return a;
        }
      }
      // Odometer with the first scheduled node most significant.
      std::size_t d = ids.size();
      while (d > 0) {
        --d;
        if (++digit[d] < cands[d].size()) break;
        digit[d] = 0;
        if (d == 0) {
          d = ids.size() + 1;
          break;
        }
      }
      if (ids.empty() || d == ids.size() + 1) break;
    }
  }
  return std::nullopt;
}

// ---- word-level SRAM replay -------------------------------------------------

namespace {

struct WordTensor {
  std::vector<bool> resident;
  std::vector<bool> backed;  // valid copy in DRAM
  int producer = -1;
  std::uint64_t age = 0;
  bool aged = false;
  Words resident_count() const {
    return static_cast<Words>(std::count(resident.begin(), resident.end(), true));
  }
};

class WordSram {
 public:
  WordSram(const TrafficPlan& plan, Words cap) : plan_(plan), cap_(cap) {
    for (std::size_t s = 0; s < plan.steps.size(); ++s) {
      for (const auto& r : plan.steps[s].reads) reads_[r.tensor].push_back(s);
    }
  }

  Words used() const { return used_; }

  void add_input(const std::string& t, Words n) {
    auto& w = tensors_[t];
    w.resident.assign(n, false);
    w.backed.assign(n, true);
  }

  Words read(const std::string& t) {
    auto& w = tensors_.at(t);
    Words misses = 0;
    for (std::size_t i = 0; i < w.resident.size(); ++i) {
      if (w.resident[i]) continue;
      ++misses;
      if (used_ < cap_) {
        w.resident[i] = true;
        ++used_;
        stamp(w);
      }
    }
    return misses;
  }

  void drop(const std::string& t) {
    auto it = tensors_.find(t);
    if (it == tensors_.end()) return;
    used_ -= it->second.resident_count();
    std::fill(it->second.resident.begin(), it->second.resident.end(), false);
  }

  Words produce(const std::string& t, Words n, int producer, std::size_t pos) {
    auto& w = tensors_[t];
    w = WordTensor{};
    w.resident.assign(n, false);
    w.backed.assign(n, false);
    w.producer = producer;
    stamp(w);
    Words writes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_ < cap_) {
        w.resident[i] = true;
        ++used_;
        continue;
      }
      if (plan_.distance_eviction) {
        const std::string v = victim(t, pos);
        if (v != t) {
          writes += evict_one(v);
          w.resident[i] = true;
          ++used_;
          continue;
        }
      }
      w.backed[i] = true;
      ++writes;
    }
    return writes;
  }

  Words reserve(const std::string& h, Words n, std::size_t pos) {
    Words writes = 0;
    while (plan_.distance_eviction && cap_ - used_ < n) {
      const std::string v = victim("", pos);
      if (v.empty()) break;
      writes += evict_one(v);
    }
    const Words got = std::min(n, cap_ - used_);
    holds_[h] = got;
    used_ += got;
    return writes;
  }

  void release(const std::string& h) {
    auto it = holds_.find(h);
    if (it == holds_.end()) return;
    used_ -= it->second;
    holds_.erase(it);
  }

  std::pair<int, Words> flush(const std::string& t) const {
    auto it = tensors_.find(t);
    if (it == tensors_.end()) return {-1, 0};
    Words dirty = 0;
    for (std::size_t i = 0; i < it->second.resident.size(); ++i) {
      if (it->second.resident[i] && !it->second.backed[i]) ++dirty;
    }
    return {it->second.producer, dirty};
  }

 private:
  void stamp(WordTensor& w) {
    if (!w.aged) {
      w.age = clock_++;
      w.aged = true;
    }
  }

  std::size_t next_use(const std::string& t, std::size_t pos) const {
    auto it = reads_.find(t);
    if (it == reads_.end()) return kNoNextUse;
    for (std::size_t s : it->second) {
      if (s > pos) return s - pos - 1;
    }
    return kNoNextUse;
  }

  // Fresh choice per word.
  std::string victim(const std::string& self, std::size_t pos) const {
    std::string best;
    std::tuple<std::size_t, Words, std::uint64_t> key{};
    bool have = false;
    for (const auto& [name, w] : tensors_) {
      if (name != self && w.resident_count() == 0) continue;
      // Larger distance first, then larger size, then smaller age.
      auto k = std::make_tuple(next_use(name, pos), static_cast<Words>(w.resident.size()),
                               ~w.age);
      if (!have || k > key) {
        key = k;
        best = name;
        have = true;
      }
    }
    return best;
  }

  Words evict_one(const std::string& v) {
    auto& w = tensors_.at(v);
    for (std::size_t i = w.resident.size(); i-- > 0;) {
      if (!w.resident[i]) continue;
      w.resident[i] = false;
      --used_;
      if (!w.backed[i]) {
        w.backed[i] = true;
        return 1;
      }
      return 0;
    }
    return 0;
  }

  const TrafficPlan& plan_;
  Words cap_;
  Words used_ = 0;
  std::uint64_t clock_ = 0;
  std::map<std::string, WordTensor> tensors_;
  std::map<std::string, Words> holds_;
  std::map<std::string, std::vector<std::size_t>> reads_;
};

}  // namespace

ReplayResult replay_words(const TensorDag& dag, const TrafficPlan& plan, Words capacity) {
  ReplayResult out;
  WordSram sram(plan, capacity);
  for (const auto& t : plan.inputs) sram.add_input(t, plan.sizes.at(t));
  std::map<int, std::size_t> row;
  for (std::size_t s = 0; s < plan.steps.size(); ++s) {
    const auto& step = plan.steps[s];
    row[step.node] = s;
    Words r = 0;
    Words w = 0;
    for (const auto& rd : step.reads) {
      r += sram.read(rd.tensor);
      out.peak = std::max(out.peak, sram.used());
    }
    for (const auto& h : step.releases) sram.release(h);
    for (const auto& t : step.frees) sram.drop(t);
    if (step.produce) {
      w += sram.produce(step.produce->tensor, step.produce->words, step.node, s);
      out.peak = std::max(out.peak, sram.used());
    }
    for (const auto& h : step.reserves) {
      w += sram.reserve(h.name, h.words, s);
      out.peak = std::max(out.peak, sram.used());
    }
    out.node_reads.push_back(r);
    out.node_writes.push_back(w);
  }
  for (const auto& t : plan.outputs) {
    auto [p, dirty] = sram.flush(t);
    if (p >= 0) out.node_writes[row.at(p)] += dirty;
  }
  (void)dag;
  for (Words r : out.node_reads) out.reads += r;
  for (Words w : out.node_writes) out.writes += w;
  return out;
}

// ---- random DAGs ------------------------------------------------------------

TensorDag random_dag(std::mt19937_64& rng, const RandomDagSpec& spec) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  static const std::uint64_t kSmall[] = {1, 2, 3, 4, 6, 8, 12};
  auto small_size = [&]() { return kSmall[pick(0, 6)]; };

  const int n = pick(spec.min_nodes, spec.max_nodes);
  std::vector<EinsumNode> nodes;
  std::vector<TensorEdge> edges;
  for (int i = 0; i < n; ++i) {
    const int k = pick(2, std::max(2, spec.max_ranks));
    const int u = pick(1, k);  // leading u ranks survive into the output
    std::vector<Rank> ranks;
    for (int r = 0; r < k; ++r) {
      ranks.push_back(Rank{"r" + std::to_string(r), 0,
                           r < u ? RankKind::uncontracted : RankKind::contracted, false});
    }
    std::vector<TensorRef> inputs;
    std::set<std::string> covered;
    for (int r = 0; r < u; ++r) covered.insert(ranks[r].name);

    for (int j = 0; j < i; ++j) {
      if (!coin(j == i - 1 ? 0.8 : 0.4)) continue;
      const auto& prod = nodes[j];
      const auto& pranks = prod.output.ranks;
      if (pranks.size() > static_cast<std::size_t>(k)) continue;
      std::vector<int> slots(k);
      for (int r = 0; r < k; ++r) slots[r] = r;
      std::shuffle(slots.begin(), slots.end(), rng);
      bool ok = true;
      for (std::size_t q = 0; q < pranks.size(); ++q) {
        const auto sz = prod.rank(pranks[q]).size;
        if (ranks[slots[q]].size != 0 && ranks[slots[q]].size != sz) ok = false;
      }
      if (!ok) continue;
      RankMap map;
      std::vector<std::string> mapped;
      for (std::size_t q = 0; q < pranks.size(); ++q) {
        ranks[slots[q]].size = prod.rank(pranks[q]).size;
        map[pranks[q]] = ranks[slots[q]].name;
        mapped.push_back(ranks[slots[q]].name);
        covered.insert(ranks[slots[q]].name);
      }
      inputs.push_back(T(prod.output.name, mapped));
      edges.push_back(make_edge(j, i, map));
    }

    for (auto& r : ranks) {
      if (r.size != 0) continue;
      r.size = spec.allow_large && coin(0.2) ? 1500 : small_size();
    }

    std::vector<std::string> missing;
    for (const auto& r : ranks) {
      if (!covered.count(r.name)) missing.push_back(r.name);
    }
    if (!missing.empty() || inputs.empty() || coin(0.4)) {
      std::vector<std::string> ext = missing;
      if (ext.empty()) ext.push_back(ranks[pick(0, k - 1)].name);
      if (ext.size() == 1 && k > 1 && coin(0.5)) {
        for (const auto& r : ranks) {
          if (r.name != ext[0]) {
            ext.push_back(r.name);
            break;
          }
        }
      }
      TensorRef t = T("E" + std::to_string(i), ext);
      if (spec.allow_sparse && ext.size() == 2 && coin(0.3)) {
        Words dense = 1;
        for (const auto& name : ext) {
          for (const auto& r : ranks) {
            if (r.name == name) dense *= r.size;
          }
        }
        t.sparse = true;
        t.nnz = std::uniform_int_distribution<std::uint64_t>(1, dense)(rng);
        for (auto& r : ranks) {
          if (r.name == ext[1]) r.compressed = true;
        }
      }
      inputs.push_back(std::move(t));
    }

    std::vector<std::string> out_ranks;
    for (int r = 0; r < u; ++r) out_ranks.push_back(ranks[r].name);
    const OpKind op = coin(0.15) ? OpKind::tensor_add : OpKind::tensor_mac;
    nodes.push_back(make_node(i, std::move(ranks), std::move(inputs),
                              T("Y" + std::to_string(i), out_ranks), op));
  }

  std::vector<std::string> outputs;
  std::set<int> consumed;
  for (const auto& e : edges) consumed.insert(e.src);
  for (const auto& nd : nodes) {
    if (!consumed.count(nd.id) || coin(0.15)) outputs.push_back(nd.output.name);
  }
  auto dag = build_dag(std::move(nodes), std::move(edges), std::move(outputs));
  analyze_structure(dag);
  return dag;
}

// ---- scalar CG trace ------------------------------------------------------

ScalarTrace scalar_cg_trace(int iters) {
  // Every value is a 1x1 tensor; multiplications are counted as they are
  // performed and application tensors on first touch.
  ScalarTrace t;
  std::set<std::string> touched;
  auto touch = [&](const std::string& name, std::uint64_t words) {
    if (touched.insert(name).second) t.words += words;
  };
  auto mul = [&](double a, double b) {
    ++t.macs;
    return a * b;
  };
  const double a = 4.0;
  const double b = 1.0;
  const double x0 = 0.0;
  touch("A", 3);  // one value, one column id, one row entry
  touch("B", 1);
  touch("X0", 1);
  double r = b - mul(a, x0);
  double p = r;
  double gamma = mul(r, r);
  double x = x0;
  for (int i = 0; i < iters; ++i) {
    const double s = mul(a, p);
    const double delta = mul(p, s);
    const double lambda = gamma / delta;
    ++t.macs;  // 1x1 inverse
    x = x + mul(p, lambda);
    r = r - mul(s, lambda);
    const double prev = gamma;
    gamma = mul(r, r);
    const double phi = gamma / prev;
    ++t.macs;
    p = r + mul(p, phi);
  }
  (void)x;
  touch("X", 1);
  return t;
}

// ---- fixtures ---------------------------------------------------------------

std::string symmetric_fixture(std::size_t M, std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> lower;
  std::uniform_int_distribution<std::size_t> pick(0, M - 1);
  while (lower.size() < pairs) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) continue;
    if (i < j) std::swap(i, j);
    lower.emplace(i, j);
  }
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real symmetric\n% generated fixture\n";
  os << M << ' ' << M << ' ' << M + pairs << '\n';
  for (std::size_t i = 0; i < M; ++i) os << i + 1 << ' ' << i + 1 << " 10.0\n";
  for (const auto& [i, j] : lower) os << i + 1 << ' ' << j + 1 << " -0.5\n";
  return os.str();
}

}  // namespace chainflow::testing
