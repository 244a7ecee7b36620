// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chainflow/dag.hpp"
#include "chainflow/kernels.hpp"

namespace chainflow {

namespace {

Rank U(const std::string& name, std::uint64_t size) { return {name, size, RankKind::uncontracted, false}; }
Rank C(const std::string& name, std::uint64_t size, bool compressed = false) {
  return {name, size, RankKind::contracted, compressed};
}

TensorRef T(const std::string& name, std::vector<std::string> ranks) {
  return {name, std::move(ranks), false, std::nullopt};
}

TensorRef sparse_A(std::uint64_t nnz) { return {"A", {"m", "k"}, true, nnz}; }

TensorEdge E(int src, int dest, RankMap map) {
  TensorEdge e;
  e.src = src;
  e.dest = dest;
  e.rank_map = std::move(map);
  return e;
}

const char* const kLabels[] = {"1", "2a", "2b", "3", "4", "5", "6", "7"};

}  // namespace

const std::vector<DatasetShape>& dataset_catalog() {
  static const std::vector<DatasetShape> catalog = {
      {"aft02", WorkloadKind::cg, 8184, 127762, 0, 0},
      {"ecology1", WorkloadKind::cg, 1000000, 4996000, 0, 0},
      {"barth5", WorkloadKind::cg, 15606, 61484, 0, 0},
      {"nasa4704", WorkloadKind::cg, 4704, 104756, 0, 0},
      {"cora", WorkloadKind::gcn, 2708, 9464, 1433, 7},
      {"protein", WorkloadKind::gcn, 3786, 14456, 29, 2},
  };
  return catalog;
}

const DatasetShape& find_dataset(const std::string& name) {
  for (const auto& d : dataset_catalog()) {
    if (d.name == name) return d;
  }
  throw ValidationError("unknown dataset '" + name + "'");
}

int cg_node_id(const std::string& label, int iter) {
  for (int i = 0; i < 8; ++i) {
    if (label == kLabels[i]) return 2 + 8 * (iter - 1) + i;
  }
  throw ValidationError("unknown CG line label '" + label + "'");
}

TensorDag build_cg_dag(std::uint64_t M, std::uint64_t N, std::uint64_t nnz, int iters) {
  if (iters < 1) throw ValidationError("CG DAG needs at least one iteration");
  if (M == 0 || N == 0 || nnz == 0) throw ValidationError("CG shapes must be positive");
  std::vector<EinsumNode> nodes;
  std::vector<TensorEdge> edges;

  auto node = [&](int id, OpKind op, std::string label, std::vector<Rank> ranks,
                  std::vector<TensorRef> inputs, TensorRef output) {
    EinsumNode n;
    n.id = id;
    n.op = op;
    n.label = std::move(label);
    n.ranks = std::move(ranks);
    n.inputs = std::move(inputs);
    n.output = std::move(output);
    nodes.push_back(std::move(n));
  };

  // R_0 = B - A X_0 ; Gamma_0 = R_0^T R_0 ; P_0 aliases R_0.
  node(0, OpKind::tensor_add, "p1", {U("m", M), C("k", M, true), U("n", N)},
       {sparse_A(nnz), T("X_0", {"k", "n"}), T("B", {"m", "n"})}, T("R_0", {"m", "n"}));
  node(1, OpKind::tensor_mac, "p2", {C("k", M), U("n'", N), U("n", N)},
       {T("R_0", {"k", "n'"}), T("R_0", {"k", "n"})}, T("Gamma_0", {"n'", "n"}));
  edges.push_back(E(0, 1, {{"m", "k"}, {"n", "n"}}));

  int p_src = 0, x_src = -1, r_src = 0, g_src = 1;
  std::string p_name = "R_0", x_name = "X_0", r_name = "R_0", g_name = "Gamma_0";

  for (int it = 1; it <= iters; ++it) {
    const int b = cg_node_id("1", it);
    const std::string sfx = "_" + std::to_string(it);
    const std::string prime(static_cast<std::size_t>(it - 1), '\'');
    auto lbl = [&](int i) { return std::string(kLabels[i]) + prime; };

    node(b, OpKind::tensor_mac, lbl(0), {U("m", M), C("k", M, true), U("n", N)},
         {sparse_A(nnz), T(p_name, {"k", "n"})}, T("S" + sfx, {"m", "n"}));
    edges.push_back(E(p_src, b, {{"m", "k"}, {"n", "n"}}));

    node(b + 1, OpKind::tensor_mac, lbl(1), {C("k", M), U("n'", N), U("n", N)},
         {T(p_name, {"k", "n'"}), T("S" + sfx, {"k", "n"})}, T("Delta" + sfx, {"n'", "n"}));
    edges.push_back(E(p_src, b + 1, {{"m", "k"}, {"n", "n'"}}));
    edges.push_back(E(b, b + 1, {{"m", "k"}, {"n", "n"}}));

    node(b + 2, OpKind::small_inverse, lbl(2), {U("n'", N), C("j", N), U("n", N)},
         {T("Delta" + sfx, {"n'", "j"}), T(g_name, {"j", "n"})}, T("Lambda" + sfx, {"n'", "n"}));
    edges.push_back(E(b + 1, b + 2, {{"n'", "n'"}, {"n", "j"}}));
    edges.push_back(E(g_src, b + 2, {{"n'", "j"}, {"n", "n"}}));

    node(b + 3, OpKind::tensor_add, lbl(3), {U("m", M), C("j", N), U("n", N)},
         {T(x_name, {"m", "n"}), T(p_name, {"m", "j"}), T("Lambda" + sfx, {"j", "n"})},
         T("X" + sfx, {"m", "n"}));
    if (x_src >= 0) edges.push_back(E(x_src, b + 3, {{"m", "m"}, {"n", "n"}}));
    edges.push_back(E(p_src, b + 3, {{"m", "m"}, {"n", "j"}}));
    edges.push_back(E(b + 2, b + 3, {{"n'", "j"}, {"n", "n"}}));

    node(b + 4, OpKind::tensor_add, lbl(4), {U("m", M), C("j", N), U("n", N)},
         {T(r_name, {"m", "n"}), T("S" + sfx, {"m", "j"}), T("Lambda" + sfx, {"j", "n"})},
         T("R" + sfx, {"m", "n"}));
    edges.push_back(E(r_src, b + 4, {{"m", "m"}, {"n", "n"}}));
    edges.push_back(E(b, b + 4, {{"m", "m"}, {"n", "j"}}));
    edges.push_back(E(b + 2, b + 4, {{"n'", "j"}, {"n", "n"}}));

    node(b + 5, OpKind::tensor_mac, lbl(5), {C("k", M), U("n'", N), U("n", N)},
         {T("R" + sfx, {"k", "n'"}), T("R" + sfx, {"k", "n"})}, T("Gamma" + sfx, {"n'", "n"}));
    edges.push_back(E(b + 4, b + 5, {{"m", "k"}, {"n", "n"}}));

    node(b + 6, OpKind::small_inverse, lbl(6), {U("n'", N), C("j", N), U("n", N)},
         {T(g_name, {"n'", "j"}), T("Gamma" + sfx, {"j", "n"})}, T("Phi" + sfx, {"n'", "n"}));
    edges.push_back(E(g_src, b + 6, {{"n'", "n'"}, {"n", "j"}}));
    edges.push_back(E(b + 5, b + 6, {{"n'", "j"}, {"n", "n"}}));

    node(b + 7, OpKind::tensor_add, lbl(7), {U("m", M), C("j", N), U("n", N)},
         {T("R" + sfx, {"m", "n"}), T(p_name, {"m", "j"}), T("Phi" + sfx, {"j", "n"})},
         T("P" + sfx, {"m", "n"}));
    edges.push_back(E(b + 4, b + 7, {{"m", "m"}, {"n", "n"}}));
    edges.push_back(E(p_src, b + 7, {{"m", "m"}, {"n", "j"}}));
    edges.push_back(E(b + 6, b + 7, {{"n'", "j"}, {"n", "n"}}));

    p_src = b + 7;
    p_name = "P" + sfx;
    x_src = b + 3;
    x_name = "X" + sfx;
    r_src = b + 4;
    r_name = "R" + sfx;
    g_src = b + 5;
    g_name = "Gamma" + sfx;
  }
  TensorDag dag = build_dag(std::move(nodes), std::move(edges), {x_name});
  analyze_structure(dag);
  return dag;
}

TensorDag build_gcn_dag(std::uint64_t M, std::uint64_t nnz, std::uint64_t N, std::uint64_t O) {
  if (M == 0 || N == 0 || O == 0 || nnz == 0) throw ValidationError("GCN shapes must be positive");
  EinsumNode spmm;
  spmm.id = 0;
  spmm.label = "spmm";
  spmm.ranks = {U("m", M), C("k", M, true), U("n", N)};
  spmm.inputs = {sparse_A(nnz), T("X0", {"k", "n"})};
  spmm.output = T("Z", {"m", "n"});
  EinsumNode gemm;
  gemm.id = 1;
  gemm.label = "gemm";
  gemm.ranks = {U("m", M), C("n", N), U("o", O)};
  gemm.inputs = {T("Z", {"m", "n"}), T("W", {"n", "o"})};
  gemm.output = T("X1", {"m", "o"});
  TensorDag dag = build_dag({spmm, gemm}, {E(0, 1, {{"m", "m"}, {"n", "n"}})});
  analyze_structure(dag);
  return dag;
}

TensorDag build_dataset_dag(const DatasetShape& d, std::uint64_t N, int iters) {
  if (d.kind == WorkloadKind::gcn) return build_gcn_dag(d.M, d.nnz, d.features, d.outputs);
  return build_cg_dag(d.M, N, d.nnz, iters);
}

DenseMatrix spmm_csr(const CsrMatrix& A, const DenseMatrix& D) {
  if (A.cols != D.rows) throw ValidationError("spmm: A.cols != D.rows");
  DenseMatrix Y(A.rows, D.cols);
  kernels::spmm({A.rows, A.row_starts.data(), A.col_ids.data(), A.values.data()}, D.cols,
                D.values.data(), Y.values.data());
  return Y;
}

DenseMatrix solve_small(const DenseMatrix& D, const DenseMatrix& G) {
  const std::size_t n = D.rows;
  if (D.cols != n || G.rows != n) throw ValidationError("solve_small: shape mismatch");
  DenseMatrix a = D;
  DenseMatrix y = G;
  double scale = 0.0;
  for (double v : a.values) scale = std::max(scale, std::abs(v));
  const double floor = 1e-12 * scale;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (!(std::abs(a(piv, c)) > floor)) {
      throw SingularBlockError("block system is singular at column " + std::to_string(c));
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      for (std::size_t j = 0; j < y.cols; ++j) std::swap(y(c, j), y(piv, j));
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      for (std::size_t j = 0; j < y.cols; ++j) y(r, j) -= f * y(c, j);
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t j = 0; j < y.cols; ++j) {
      double s = y(c, j);
      for (std::size_t k = c + 1; k < n; ++k) s -= a(c, k) * y(k, j);
      y(c, j) = s / a(c, c);
    }
  }
  return y;
}

namespace {

DenseMatrix gram(const DenseMatrix& P, const DenseMatrix& S) {
  DenseMatrix c(P.cols, P.cols);
  kernels::gemm_tn(P.rows, P.cols, P.values.data(), S.values.data(), c.values.data());
  return c;
}

DenseMatrix update(const DenseMatrix& X, const DenseMatrix& P, const DenseMatrix& L, double sign) {
  DenseMatrix y(X.rows, X.cols);
  kernels::update(X.rows, X.cols, X.values.data(), P.values.data(), L.values.data(), sign,
                  y.values.data());
  return y;
}

bool diag_converged(const DenseMatrix& G, double tol) {
  for (std::size_t i = 0; i < G.rows; ++i) {
    if (!(G(i, i) <= tol)) return false;
  }
  return true;
}

}  // namespace

CgTrace run_block_cg(const CsrMatrix& A, const DenseMatrix& B, const DenseMatrix& X0, double tol,
                     int max_iters) {
  A.validate();
  if (A.rows != A.cols) throw ValidationError("block CG needs a square A");
  if (B.rows != A.rows || X0.rows != A.rows || X0.cols != B.cols || B.cols == 0) {
    throw ValidationError("block CG: B and X0 must both be M x N");
  }
  const std::uint64_t M = A.rows, N = B.cols, nnz = A.nnz();

  CgTrace tr;
  tr.X = X0;
  DenseMatrix AX = spmm_csr(A, X0);
  DenseMatrix R(M, N);
  for (std::size_t i = 0; i < R.values.size(); ++i) R.values[i] = B.values[i] - AX.values[i];
  DenseMatrix P = R;
  DenseMatrix Gamma = gram(R, R);
  tr.macs += nnz * N + M * N * N;
  if (diag_converged(Gamma, tol)) {
    tr.converged = true;
    return tr;
  }

  for (int it = 1; it <= max_iters; ++it) {
    DenseMatrix S = spmm_csr(A, P);
    DenseMatrix Delta = gram(P, S);
    for (std::size_t i = 0; i < Delta.rows; ++i) {
      if (!(Delta(i, i) > 0.0)) {
        throw NumericalError("P^T A P has a non-positive diagonal; A is not positive definite");
      }
    }
    DenseMatrix Lambda = solve_small(Delta, Gamma);
    tr.X = update(tr.X, P, Lambda, 1.0);
    R = update(R, S, Lambda, -1.0);
    DenseMatrix Gamma_prev = std::move(Gamma);
    Gamma = gram(R, R);
    tr.macs += nnz * N + 4 * M * N * N + N * N * N;
    tr.iterations = it;
    tr.residual_norms.push_back(frobenius_norm(R));
    if (diag_converged(Gamma, tol)) {
      tr.converged = true;
      return tr;
    }
    DenseMatrix Phi = solve_small(Gamma_prev, Gamma);
    P = update(R, P, Phi, 1.0);
    tr.macs += M * N * N + N * N * N;
  }
  throw NotConvergedError("block CG did not converge in " + std::to_string(max_iters) +
                              " iterations",
                          std::move(tr));
}

CsrMatrix symmetrize_shift(const CsrMatrix& A, double shift) {
  if (A.rows != A.cols) throw ValidationError("symmetrize_shift needs a square matrix");
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t p = A.row_starts[i]; p < A.row_starts[i + 1]; ++p) {
      rows[i].emplace_back(A.col_ids[p], 0.5 * A.values[p]);
      rows[A.col_ids[p]].emplace_back(i, 0.5 * A.values[p]);
    }
    rows[i].emplace_back(i, shift);
  }
  CsrMatrix out;
  out.rows = out.cols = A.rows;
  for (auto& r : rows) {
    std::sort(r.begin(), r.end(), [](auto& x, auto& y) { return x.first < y.first; });
    for (std::size_t q = 0; q < r.size();) {
      std::size_t c = r[q].first;
      double v = 0.0;
      for (; q < r.size() && r[q].first == c; ++q) v += r[q].second;
      out.col_ids.push_back(c);
      out.values.push_back(v);
    }
    out.row_starts.push_back(out.col_ids.size());
  }
  return out;
}

CsrMatrix random_spd(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> g(m * m);
  for (auto& v : g) v = gauss(rng);
  CsrMatrix a;
  a.rows = a.cols = m;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = i == j ? static_cast<double>(m) : 0.0;
      for (std::size_t k = 0; k < m; ++k) s += g[k * m + i] * g[k * m + j];
      a.col_ids.push_back(j);
      a.values.push_back(s);
    }
    a.row_starts.push_back(a.col_ids.size());
  }
  return a;
}

}  // namespace chainflow
