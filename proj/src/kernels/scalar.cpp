// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "chainflow/kernels.hpp"

namespace chainflow::kernels::scalar {

void spmm(const CsrView& a, std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* yi = y + i * n;
    std::fill(yi, yi + n, 0.0);
    for (std::size_t p = a.row_starts[i]; p < a.row_starts[i + 1]; ++p) {
      const double v = a.values[p];
      const double* xr = x + a.col_ids[p] * n;
      for (std::size_t j = 0; j < n; ++j) yi[j] += v * xr[j];
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s, double* c) {
  std::fill(c, c + n * n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double* pr = p + r * n;
    const double* sr = s + r * n;
    for (std::size_t a = 0; a < n; ++a) {
      const double pa = pr[a];
      double* ca = c + a * n;
      for (std::size_t b = 0; b < n; ++b) ca[b] += pa * sr[b];
    }
  }
}

void update(std::size_t m, std::size_t n, const double* x, const double* p, const double* l,
            double sign, double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* pi = p + i * n;
    for (std::size_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t a = 0; a < n; ++a) acc += pi[a] * l[a * n + b];
      y[i * n + b] = x[i * n + b] + sign * acc;
    }
  }
}

}  // namespace chainflow::kernels::scalar
