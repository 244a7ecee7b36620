// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

// Numeric inner loops of the block-CG executor. Each has a portable scalar
// version and an AVX2+FMA version; the unqualified entry points pick one at
// first use from the running CPU.

namespace chainflow::kernels {

/// Y[rows x n] = A * X, A in CSR, X row-major [A.cols x n].
struct CsrView {
  std::size_t rows;
  const std::size_t* row_starts;
  const std::size_t* col_ids;
  const double* values;
};

/// C[n x n] = P^T S with P, S row-major [m x n].
using GemmTnFn = void (*)(std::size_t m, std::size_t n, const double* p, const double* s,
                          double* c);
using SpmmFn = void (*)(const CsrView& a, std::size_t n, const double* x, double* y);
/// Y[m x n] = X + sign * P * L with L row-major [n x n].
using UpdateFn = void (*)(std::size_t m, std::size_t n, const double* x, const double* p,
                          const double* l, double sign, double* y);

namespace scalar {
void spmm(const CsrView& a, std::size_t n, const double* x, double* y);
void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s, double* c);
void update(std::size_t m, std::size_t n, const double* x, const double* p, const double* l,
            double sign, double* y);
}  // namespace scalar

namespace avx2 {
void spmm(const CsrView& a, std::size_t n, const double* x, double* y);
void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s, double* c);
void update(std::size_t m, std::size_t n, const double* x, const double* p, const double* l,
            double sign, double* y);
}  // namespace avx2

bool avx2_available();

enum class Isa { scalar, avx2 };
/// Isa used by the dispatching entry points.
Isa active_isa();
/// Overrides dispatch (tests and benchmarking). Requesting avx2 on a CPU
/// without it throws.
void force_isa(Isa isa);

void spmm(const CsrView& a, std::size_t n, const double* x, double* y);
void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s, double* c);
void update(std::size_t m, std::size_t n, const double* x, const double* p, const double* l,
            double sign, double* y);

}  // namespace chainflow::kernels
