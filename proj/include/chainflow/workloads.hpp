// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainflow/errors.hpp"
#include "chainflow/ir.hpp"
#include "chainflow/matrix.hpp"

namespace chainflow {

enum class WorkloadKind { cg, gcn };

/// Embedded dataset shapes so sweeps need no matrix files.
struct DatasetShape {
  std::string name;
  WorkloadKind kind = WorkloadKind::cg;
  std::uint64_t M = 0;
  std::uint64_t nnz = 0;
  /// GCN only: feature width N and output width O.
  std::uint64_t features = 0;
  std::uint64_t outputs = 0;
};

const std::vector<DatasetShape>& dataset_catalog();
/// Throws ValidationError for unknown names.
const DatasetShape& find_dataset(const std::string& name);

/// Unrolled block CG. Node ids: prologue R_0 = 0, Gamma_0 = 1; iteration i
/// (1-based) uses 2 + 8*(i-1) + {0:"1", 1:"2a", 2:"2b", 3:"3", 4:"4", 5:"5",
/// 6:"6", 7:"7"} with labels primed per iteration ("4'", "4''", ...).
/// P_0 is the same tensor as R_0 and Gamma_prev is the previous Gamma.
TensorDag build_cg_dag(std::uint64_t M, std::uint64_t N, std::uint64_t nnz, int iters);

/// Id of the node for solver step `label` ("1", "2a", ..., "7") in
/// iteration `iter` (1-based).
int cg_node_id(const std::string& label, int iter);

/// Z = A X0 (SpMM) feeding X1 = Z W (GEMM).
TensorDag build_gcn_dag(std::uint64_t M, std::uint64_t nnz, std::uint64_t N, std::uint64_t O);

/// Catalog entry to DAG; N is ignored for GCN datasets.
TensorDag build_dataset_dag(const DatasetShape& d, std::uint64_t N, int iters);

struct CgTrace {
  int iterations = 0;
  std::vector<double> residual_norms;  // ||R||_F after each iteration's line 4
  bool converged = false;
  DenseMatrix X;
  /// Multiply-accumulates performed, inverse solves counted as N^3.
  std::uint64_t macs = 0;
};

class NotConvergedError : public NumericalError {
 public:
  NotConvergedError(const std::string& what, CgTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const CgTrace& trace() const { return trace_; }

 private:
  CgTrace trace_;
};

/// Block CG. Stops once every diagonal entry of Gamma = R^T R is <= tol.
/// Throws SingularBlockError for a rank-deficient N x N system and
/// NotConvergedError when max_iters pass without convergence.
CgTrace run_block_cg(const CsrMatrix& A, const DenseMatrix& B, const DenseMatrix& X0,
                     double tol, int max_iters);

DenseMatrix spmm_csr(const CsrMatrix& A, const DenseMatrix& D);

/// Solves D Y = G for square D with partial pivoting. Throws
/// SingularBlockError when a pivot drops below 1e-12 * max|D|.
DenseMatrix solve_small(const DenseMatrix& D, const DenseMatrix& G);

/// A <- (A + A^T)/2 + shift * I. Preprocessing for non-SPD inputs.
CsrMatrix symmetrize_shift(const CsrMatrix& A, double shift);

/// G^T G + m I for a seeded Gaussian G; dense SPD returned in CSR form.
CsrMatrix random_spd(std::size_t m, std::uint64_t seed);

}  // namespace chainflow
