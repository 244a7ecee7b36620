// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "chainflow/dag.hpp"
#include "chainflow/errors.hpp"
#include "chainflow/intensity.hpp"
#include "chainflow/loop_order.hpp"
#include "chainflow/matrix_market.hpp"
#include "chainflow/reuse.hpp"
#include "chainflow/traffic.hpp"
#include "chainflow/workloads.hpp"
#include "support.hpp"

using namespace chainflow;

namespace {

// Pinned tolerances and budgets.
constexpr double kLimitRelTol = 0.01;
constexpr double kTwoByTwoTol = 1e-8;
constexpr double kDirectSolveTol = 1e-6;
constexpr double kGeomeanFloor = 3.0;
constexpr double kCellFloor = 1.0;
constexpr double kCellCeiling = 30.0;
constexpr double kBudget1 = 1.0, kBudget3 = 10.0, kBudget4 = 30.0, kBudget8 = 1.0;
constexpr int kOracleCases = 200;
constexpr int kRandomTuples = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!pass) return;
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void report(int id, const char* title, double budget, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0 && secs > budget) o.fail("took " + fmt("%.2f", secs) + " s, budget " + fmt("%.0f", budget) + " s");
  failures += !o.pass;
  std::printf("[%s] %2d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, secs,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

bool near_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

// ---- 1 ----------------------------------------------------------------------

Outcome formula_fidelity() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> dim(1, 200000);
  int bad = 0;
  for (int i = 0; i < kRandomTuples; ++i) {
    const auto M = dim(rng), K = dim(rng), N = std::uniform_int_distribution<std::uint64_t>(1, 64)(rng);
    const auto nnz = std::uniform_int_distribution<std::uint64_t>(1, std::min<std::uint64_t>(M * K, 50 * M))(rng);
    bad += !(ai_gemm(M, K, N).ai() == Rational{M * K * N, M * K + K * N + M * N});
    bad += !(ai_spmm(M, K, N, nnz).ai() == Rational{nnz * N, 2 * nnz + M + N * K + M * N});
  }
  if (bad) o.fail(std::to_string(bad) + " of " + std::to_string(2 * kRandomTuples) + " rationals differ");

  const std::uint64_t big = 1000000;
  // Matrix-vector: the closed form M*K/(M*K+K+M) tends to 1.
  const double mv = ai_gemm(big, big, 1).ai().value();
  if (!near_rel(mv, 1.0, kLimitRelTol)) o.fail("matvec " + fmt("%.6f", mv) + " not near 1");
  // Skewed GEMM, K = N = 16: N/2.
  const double sk = ai_gemm(big, 16, 16).ai().value();
  if (!near_rel(sk, 8.0, kLimitRelTol)) o.fail("skewed gemm " + fmt("%.4f", sk) + " not near 8");
  // SpMM, nz_av = 5, N = 16: nz*N/(2nz+1+2N) = 80/43.
  const double sp = ai_spmm(big, big, 16, 5 * big).ai().value();
  if (!near_rel(sp, 80.0 / 43.0, kLimitRelTol)) o.fail("spmm " + fmt("%.5f", sp) + " not near 80/43");
  o.note(std::to_string(2 * kRandomTuples) + " exact rationals; limits matvec " + fmt("%.6f", mv) +
         " (closed form tends to 1, not 1/2), skewed " + fmt("%.4f", sk) + ", spmm " + fmt("%.5f", sp));
  return o;
}

// ---- 2 ----------------------------------------------------------------------

std::string node_label(const TensorDag& d, int id) { return d.node(id).label; }

Outcome cg_classification() {
  Outcome o;
  auto dag = build_cg_dag(10000, 8, 90000, 2);
  classify(dag);
  using P = ReusePattern;
  const P S = P::sequential, PL = P::pipelineable, WB = P::pipeline_with_writeback;
  // src label, dest label, tensor, pattern
  const std::vector<std::tuple<std::string, std::string, std::string, P>> golden = {
      {"p1", "p2", "R_0", PL},         {"p1", "1", "R_0", S},           {"p1", "2a", "R_0", WB},
      {"1", "2a", "S_1", PL},          {"2a", "2b", "Delta_1", S},      {"p2", "2b", "Gamma_0", S},
      {"p1", "3", "R_0", PL},          {"2b", "3", "Lambda_1", S},      {"p1", "4", "R_0", WB},
      {"1", "4", "S_1", WB},           {"2b", "4", "Lambda_1", S},      {"4", "5", "R_1", PL},
      {"p2", "6", "Gamma_0", S},       {"5", "6", "Gamma_1", S},        {"4", "7", "R_1", WB},
      {"p1", "7", "R_0", WB},          {"6", "7", "Phi_1", S},          {"7", "1'", "P_1", S},
      {"7", "2a'", "P_1", WB},         {"1'", "2a'", "S_2", PL},        {"2a'", "2b'", "Delta_2", S},
      {"5", "2b'", "Gamma_1", S},      {"3", "3'", "X_1", PL},          {"7", "3'", "P_1", PL},
      {"2b'", "3'", "Lambda_2", S},    {"4", "4'", "R_1", WB},          {"1'", "4'", "S_2", WB},
      {"2b'", "4'", "Lambda_2", S},    {"4'", "5'", "R_2", PL},         {"5", "6'", "Gamma_1", S},
      {"5'", "6'", "Gamma_2", S},      {"4'", "7'", "R_2", WB},         {"7", "7'", "P_1", WB},
      {"6'", "7'", "Phi_2", S},
  };
  std::map<std::tuple<std::string, std::string, std::string>, P> got;
  for (const auto& e : dag.edges) {
    if (!e.pattern) {
      o.fail("unclassified edge");
      return o;
    }
    got[{node_label(dag, e.src), node_label(dag, e.dest), e.tensor.name}] = *e.pattern;
  }
  if (got.size() != golden.size()) {
    o.fail(std::to_string(got.size()) + " edges, expected " + std::to_string(golden.size()));
  }
  for (const auto& [s, d, t, p] : golden) {
    auto it = got.find({s, d, t});
    if (it == got.end()) {
      o.fail("missing edge " + s + "->" + d);
    } else if (it->second != p) {
      o.fail(s + "->" + d + " (" + t + ") is " + std::string(to_string(it->second)) + ", expected " +
             std::string(to_string(p)));
    }
  }
  // Lambda fans out in parallel to lines 3 and 4.
  for (int it = 1; it <= 2; ++it) {
    const auto& lam = dag.node(cg_node_id("2b", it));
    std::set<int> dests;
    for (auto i : dag.out_edges(lam.id)) dests.insert(dag.edges[i].dest);
    if (!lam.parallel_multicast || dests != std::set<int>{cg_node_id("3", it), cg_node_id("4", it)}) {
      o.fail("node " + lam.label + " is not a parallel multicast to 3 and 4");
    }
  }
  // C-dominant and inverse producers feed only sequential edges.
  for (const auto& n : dag.nodes) {
    const bool c_dom = n.dominance.kind == Dominance::C;
    if (!c_dom && n.op != OpKind::small_inverse) continue;
    for (auto i : dag.out_edges(n.id)) {
      if (dag.edges[i].pattern != S) o.fail("out-edge of " + n.label + " is not sequential");
    }
  }
  o.note(std::to_string(golden.size()) + " edges match the golden table");
  return o;
}

// ---- 3 ----------------------------------------------------------------------

TensorDag induced(const TensorDag& full, const std::vector<int>& ids) {
  std::set<int> keep(ids.begin(), ids.end());
  std::vector<EinsumNode> nodes;
  for (int id : ids) {
    EinsumNode n = full.node(id);
    n.dominance = {};
    n.numcast = 0;
    n.parallel_multicast = false;
    nodes.push_back(n);
  }
  std::vector<TensorEdge> edges;
  std::set<std::string> consumed;
  for (const auto& e : full.edges) {
    if (keep.count(e.src) && keep.count(e.dest)) {
      TensorEdge c = e;
      c.is_transitive = false;
      c.pattern.reset();
      edges.push_back(c);
      consumed.insert(e.tensor.name);
    }
  }
  std::vector<std::string> outputs;
  for (const auto& n : nodes) {
    if (!consumed.count(n.output.name)) outputs.push_back(n.output.name);
  }
  auto dag = build_dag(std::move(nodes), std::move(edges), std::move(outputs));
  analyze_structure(dag);
  return dag;
}

Outcome cg_loop_order() {
  Outcome o;
  auto dag = build_cg_dag(10000, 8, 90000, 2);
  classify(dag);
  const auto a = assign_loop_orders(dag);
  if (a.swizzle_penalty != 0) o.fail("penalty " + std::to_string(a.swizzle_penalty));
  for (const auto& e : dag.edges) {
    if (e.pattern != ReusePattern::pipelineable && e.pattern != ReusePattern::pipeline_with_hold) continue;
    if (!pipeline_compatible(dag.node(e.src), e, a.orders.at(e.src), a.orders.at(e.dest))) {
      o.fail("pipeline edge " + dag.node(e.src).label + "->" + dag.node(e.dest).label + " incompatible");
    }
  }
  for (int it = 1; it <= 2; ++it) {
    const int lam = cg_node_id("2b", it), n3 = cg_node_id("3", it), n4 = cg_node_id("4", it);
    const TensorEdge *e3 = nullptr, *e4 = nullptr;
    for (const auto& e : dag.edges) {
      if (e.src == lam && e.dest == n3) e3 = &e;
      if (e.src == lam && e.dest == n4) e4 = &e;
    }
    if (!e3 || !e4 || consumer_projection(*e3, a.orders.at(n3)) != consumer_projection(*e4, a.orders.at(n4))) {
      o.fail("nodes 3 and 4 disagree on Lambda order in iteration " + std::to_string(it));
      continue;
    }
    // Innermost loop of 3 never indexes P; innermost loop of 4 never indexes S.
    auto stationary = [&](int node, const std::string& tensor) {
      const auto& n = dag.node(node);
      const auto inner = a.orders.at(node).back();
      for (const auto& in : n.inputs) {
        if (in.name.rfind(tensor, 0) == 0) {
          return std::find(in.ranks.begin(), in.ranks.end(), inner) == in.ranks.end();
        }
      }
      return false;
    };
    if (!stationary(n3, "P_") && !stationary(n3, "R_0")) o.fail("line 3 is not P-stationary");
    if (!stationary(n4, "S_")) o.fail("line 4 is not S-stationary");
  }

  // Exhaustive check on the 4-node slice 1 -> 2a -> 2b -> 4 with the 1 -> 4 skip.
  auto full = build_cg_dag(10000, 8, 90000, 1);
  auto sub = induced(full, {cg_node_id("1", 1), cg_node_id("2a", 1), cg_node_id("2b", 1), cg_node_id("4", 1)});
  classify(sub);
  const auto eps = default_epsilon_schedule(sub);
  const auto fast = assign_loop_orders(sub, eps);
  const auto brute = testing::brute_force_assign(sub, eps);
  if (!brute) {
    o.fail("brute force found no assignment");
  } else if (brute->epsilon != fast.epsilon || brute->swizzle_penalty != fast.swizzle_penalty ||
             brute->orders != fast.orders) {
    o.fail("sub-DAG search (eps " + std::to_string(fast.epsilon) + ") disagrees with enumeration (eps " +
           std::to_string(brute->epsilon) + ")");
  }
  o.note("penalty 0 over " + std::to_string(a.orders.size()) + " nodes; 4-node enumeration agrees at eps " +
         std::to_string(fast.epsilon));
  return o;
}

// ---- 4 and 7 ----------------------------------------------------------------

struct CellKey {
  std::string dataset;
  std::uint64_t N;
  double mb;
  auto operator<=>(const CellKey&) const = default;
};

std::vector<SweepCell> g_cells;

std::map<CellKey, std::map<Policy, Words>> by_cell(const std::vector<SweepCell>& cells) {
  std::map<CellKey, std::map<Policy, Words>> out;
  for (const auto& c : cells) out[{c.dataset, c.N, c.sram_mb}][c.policy] = c.report.dram_words();
  return out;
}

std::string cell_name(const CellKey& k) {
  return k.dataset + " N=" + std::to_string(k.N) + " " + fmt("%g", k.mb) + "MB";
}

Outcome traffic_ordering() {
  Outcome o;
  SweepSpec s;
  s.datasets = {"aft02", "ecology1", "barth5", "nasa4704"};
  s.Ns = {1, 8, 16};
  s.sram_mb = {1, 4, 16};
  s.policies = all_policies();
  g_cells = run_sweep(s);
  const auto cells = by_cell(g_cells);
  if (cells.size() != 36) o.fail(std::to_string(cells.size()) + " cells, expected 36");
  int bad = 0;
  for (const auto& [k, d] : cells) {
    const Words id = d.at(Policy::ideal), map = d.at(Policy::gogeta_map),
                so = d.at(Policy::seq_overflow), sf = d.at(Policy::seq_flex);
    if (!(id <= map && map <= so && so <= sf)) {
      ++bad;
      o.fail(cell_name(k) + " out of order");
    }
  }
  if (!bad) o.note("ideal <= gogeta_map <= seq_overflow <= seq_flex in all " + std::to_string(cells.size()) + " cells");
  return o;
}

Outcome headline() {
  Outcome o;
  const auto cells = by_cell(g_cells);
  std::vector<double> f;
  double lo = 1e300, hi = 0;
  std::string lo_cell, hi_cell;
  std::vector<std::string> above, below;
  for (const auto& [k, d] : cells) {
    const double r = static_cast<double>(d.at(Policy::seq_flex)) / static_cast<double>(d.at(Policy::gogeta_map));
    f.push_back(r);
    if (r < lo) lo = r, lo_cell = cell_name(k);
    if (r > hi) hi = r, hi_cell = cell_name(k);
    if (r < kCellFloor) below.push_back(cell_name(k) + " " + fmt("%.2fx", r));
    if (r > kCellCeiling) above.push_back(cell_name(k) + " " + fmt("%.2fx", r));
  }
  if (f.empty()) {
    o.fail("no sweep cells");
    return o;
  }
  const double g = geomean(f);
  const std::string summary = "geomean " + fmt("%.2fx", g) + ", range " + fmt("%.3fx", lo) + " (" + lo_cell +
                              ") to " + fmt("%.2fx", hi) + " (" + hi_cell + ")";
  if (g < kGeomeanFloor) o.fail("geomean " + fmt("%.2fx", g) + " below " + fmt("%.1fx", kGeomeanFloor));
  for (const auto& c : below) o.fail("below 1x: " + c);
  if (!above.empty()) {
    std::string list;
    for (const auto& c : above) list += (list.empty() ? "" : ", ") + c;
    o.fail(std::to_string(above.size()) + " cells above " + fmt("%.0fx", kCellCeiling) + ": " + list);
  }
  if (!o.pass) o.detail = summary + "; " + o.detail;
  else o.note(summary);
  return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome ideal_hits() {
  Outcome o;
  const auto cells = by_cell(g_cells);
  int checked = 0;
  for (const auto& [k, d] : cells) {
    if ((k.dataset != "aft02" && k.dataset != "nasa4704") || k.mb < 4) continue;
    ++checked;
    if (d.at(Policy::gogeta_map) != d.at(Policy::ideal)) {
      o.fail(cell_name(k) + ": gogeta_map " + std::to_string(d.at(Policy::gogeta_map)) + " vs ideal " +
             std::to_string(d.at(Policy::ideal)));
    }
  }
  SweepSpec s;
  s.datasets = {"protein"};
  s.Ns = {0};
  s.sram_mb = {1};
  s.policies = {Policy::gogeta_map, Policy::ideal};
  s.iters = 1;
  const auto pc = by_cell(run_sweep(s));
  for (const auto& [k, d] : pc) {
    ++checked;
    if (d.at(Policy::gogeta_map) != d.at(Policy::ideal)) o.fail("protein 1MB misses ideal");
  }
  o.note(std::to_string(checked) + " cells exactly at ideal");
  return o;
}

// ---- 6 ----------------------------------------------------------------------

Outcome noc_formulas() {
  Outcome o;
  const std::uint64_t M = 8184, N = 8;
  auto dag = build_cg_dag(M, N, 127762, 1);
  classify(dag);
  const auto a = assign_loop_orders(dag);
  MachineConfig c;
  c.clusters = 16;
  const int n4 = cg_node_id("4", 1), n5 = cg_node_id("5", 1);
  const Words map = noc_pair(dag, a, c, Policy::gogeta_map, n4, n5);
  const Words df = noc_pair(dag, a, c, Policy::gogeta_df, n4, n5);
  if (map != 2 * N * N * 15) o.fail("gogeta_map " + std::to_string(map) + ", expected 1920");
  if (df != M * N) o.fail("gogeta_df " + std::to_string(df) + ", expected " + std::to_string(M * N));
  o.note("gogeta_map " + std::to_string(map) + " words, gogeta_df " + std::to_string(df) + " words");
  return o;
}

// ---- 8 ----------------------------------------------------------------------

DenseMatrix dense_of(const CsrMatrix& A) {
  DenseMatrix D(A.rows, A.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (auto p = A.row_starts[i]; p < A.row_starts[i + 1]; ++p) D(i, A.col_ids[p]) = A.values[p];
  }
  return D;
}

Outcome functional_cg() {
  Outcome o;
  {
    const auto A = coo_to_csr({2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}}});
    DenseMatrix B(2, 1);
    B(0, 0) = 1;
    B(1, 0) = 2;
    const auto t = run_block_cg(A, B, DenseMatrix(2, 1), 1e-24, 10);
    if (std::abs(t.X(0, 0) - 1.0 / 11) > kTwoByTwoTol || std::abs(t.X(1, 0) - 7.0 / 11) > kTwoByTwoTol) {
      o.fail("2x2 gives [" + fmt("%.10f", t.X(0, 0)) + ", " + fmt("%.10f", t.X(1, 0)) + "]");
    }
  }
  {
    const std::size_t m = 64, n = 8;
    const auto A = random_spd(m, 17);
    DenseMatrix B(m, n);
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& v : B.values) v = u(rng);
    const auto t = run_block_cg(A, B, DenseMatrix(m, n), 1e-24, 500);
    const auto X = solve_small(dense_of(A), B);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < X.values.size(); ++i) {
      err = std::max(err, std::abs(X.values[i] - t.X.values[i]));
      scale = std::max(scale, std::abs(X.values[i]));
    }
    if (err > kDirectSolveTol * std::max(1.0, scale)) o.fail("random SPD error " + fmt("%.2e", err));
    for (std::size_t i = 1; i < t.residual_norms.size(); ++i) {
      if (t.residual_norms[i] > t.residual_norms[i - 1]) {
        o.fail("residual rises at iteration " + std::to_string(i + 1));
        break;
      }
    }
    o.note("random SPD 64x64 N=8 max error " + fmt("%.1e", err) + " in " + std::to_string(t.iterations) +
           " iterations");
  }
  {
    CooMatrix c{50, 50, {}};
    for (std::size_t i = 0; i < 50; ++i) c.entries.push_back({i, i, 1.0});
    DenseMatrix B(50, 3);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& v : B.values) v = u(rng);
    const auto t = run_block_cg(coo_to_csr(c), B, DenseMatrix(50, 3), 1e-24, 10);
    if (t.iterations != 1 || !t.converged) o.fail("identity took " + std::to_string(t.iterations) + " iterations");
  }
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome policy_oracle() {
  Outcome o;
  std::mt19937_64 rng(777);
  int cases = 0, mismatches = 0, spills = 0;
  while (cases < kOracleCases) {
    auto dag = testing::random_dag(rng, {.min_nodes = 2, .max_nodes = 4, .allow_large = false});
    classify(dag);
    LoopOrderAssignment a;
    try {
      a = assign_loop_orders(dag);
    } catch (const NoAssignmentError&) {
      continue;
    }
    MachineConfig c;
    c.rf_bytes_per_pe = std::bernoulli_distribution(0.5)(rng) ? 0 : 512;
    Words total = 0;
    for (const auto& n : dag.nodes) total += tensor_words(n, n.output);
    c.sram_bytes = std::uniform_int_distribution<Words>(0, total + 64)(rng) * c.word_bytes;
    for (Policy pol : {Policy::seq_flex, Policy::seq_overflow, Policy::gogeta_df, Policy::gogeta_map}) {
      const auto plan = build_plan(dag, &a, c, pol);
      const Words cap = pol == Policy::seq_flex ? 0 : c.sram_words();
      const auto want = testing::replay_words(dag, plan, cap);
      const auto got = simulate(dag, &a, c, pol);
      if (got.dram_read_words != want.reads || got.dram_write_words != want.writes) {
        if (++mismatches <= 3) {
          o.fail("case " + std::to_string(cases) + " " + std::string(to_string(pol)) + ": " +
                 std::to_string(got.dram_words()) + " vs replay " + std::to_string(want.reads + want.writes));
        }
      }
      spills += pol == Policy::gogeta_df && got.dram_write_words > 0;
    }
    ++cases;
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " mismatches");
  o.note(std::to_string(cases) + " DAGs x 4 policies match word-level replay (" + std::to_string(spills) +
         " with writes)");
  return o;
}

// ---- 10 ---------------------------------------------------------------------

Outcome ingestion() {
  Outcome o;
  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n% fixture\n2 2 3\n1 1 4\n2 1 1\n2 2 3\n");
  const auto coo = parse_matrix_market(sym);
  const auto csr = coo_to_csr(coo);
  if (coo.entries.size() != 4 || csr.row_starts != std::vector<std::size_t>{0, 2, 4} ||
      csr.values != std::vector<double>{4, 1, 1, 3}) {
    o.fail("symmetric expansion");
  }
  std::istringstream big(testing::symmetric_fixture(2000, 7000, 4));
  const auto a = coo_to_csr(parse_matrix_market(big));
  std::ostringstream out;
  write_matrix_market(out, csr_to_coo(a));
  std::istringstream back_in(out.str());
  const auto b = coo_to_csr(parse_matrix_market(back_in));
  if (a.row_starts != b.row_starts || a.col_ids != b.col_ids || a.values != b.values) o.fail("round trip");
  std::istringstream aft(testing::symmetric_fixture(8184, 59789, 1));
  const auto st = matrix_stats(coo_to_csr(parse_matrix_market(aft)));
  if (st.M != 8184 || st.nnz != 127762 || !st.symmetric) {
    o.fail("stats (" + std::to_string(st.M) + ", " + std::to_string(st.nnz) + ")");
  }
  o.note("aft02-shaped fixture (" + std::to_string(st.M) + ", " + std::to_string(st.nnz) + ")");
  return o;
}

}  // namespace

int main() {
  report(1, "formula fidelity", kBudget1, formula_fidelity);
  report(2, "CG classification golden table", 0, cg_classification);
  report(3, "loop-order assignment", kBudget3, cg_loop_order);
  report(4, "traffic ordering over the sweep", kBudget4, traffic_ordering);
  report(5, "ideal hits", 0, ideal_hits);
  report(6, "NoC pair formulas", 0, noc_formulas);
  report(7, "reduction over SEQ-Flex", 0, headline);
  report(8, "functional block CG", kBudget8, functional_cg);
  report(9, "SRAM policy oracle", 0, policy_oracle);
  report(10, "Matrix Market ingestion", 0, ingestion);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
