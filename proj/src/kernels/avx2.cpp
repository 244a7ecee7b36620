// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled without global -mavx2; each function carries its own target so
// the binary still runs on CPUs that lack it (dispatch.cpp checks first).

#include <immintrin.h>

#include <algorithm>

#include "chainflow/kernels.hpp"

#define CHAINFLOW_AVX2 __attribute__((target("avx2,fma")))

namespace chainflow::kernels::avx2 {

CHAINFLOW_AVX2 void spmm(const CsrView& a, std::size_t n, const double* x, double* y) {
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* yi = y + i * n;
    std::fill(yi, yi + n, 0.0);
    for (std::size_t p = a.row_starts[i]; p < a.row_starts[i + 1]; ++p) {
      const double v = a.values[p];
      const __m256d vv = _mm256_set1_pd(v);
      const double* xr = x + a.col_ids[p] * n;
      std::size_t j = 0;
      for (; j < n4; j += 4) {
        _mm256_storeu_pd(yi + j, _mm256_fmadd_pd(vv, _mm256_loadu_pd(xr + j), _mm256_loadu_pd(yi + j)));
      }
      for (; j < n; ++j) yi[j] += v * xr[j];
    }
  }
}

CHAINFLOW_AVX2 void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s,
                            double* c) {
  const std::size_t n4 = n & ~std::size_t{3};
  std::fill(c, c + n * n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const double* pr = p + r * n;
    const double* sr = s + r * n;
    for (std::size_t a = 0; a < n; ++a) {
      const __m256d pa = _mm256_set1_pd(pr[a]);
      double* ca = c + a * n;
      std::size_t b = 0;
      for (; b < n4; b += 4) {
        _mm256_storeu_pd(ca + b, _mm256_fmadd_pd(pa, _mm256_loadu_pd(sr + b), _mm256_loadu_pd(ca + b)));
      }
      for (; b < n; ++b) ca[b] += pr[a] * sr[b];
    }
  }
}

CHAINFLOW_AVX2 void update(std::size_t m, std::size_t n, const double* x, const double* p,
                           const double* l, double sign, double* y) {
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d sv = _mm256_set1_pd(sign);
  for (std::size_t i = 0; i < m; ++i) {
    const double* pi = p + i * n;
    std::size_t b = 0;
    for (; b < n4; b += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t a = 0; a < n; ++a) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(pi[a]), _mm256_loadu_pd(l + a * n + b), acc);
      }
      _mm256_storeu_pd(y + i * n + b, _mm256_fmadd_pd(sv, acc, _mm256_loadu_pd(x + i * n + b)));
    }
    for (; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t a = 0; a < n; ++a) acc += pi[a] * l[a * n + b];
      y[i * n + b] = x[i * n + b] + sign * acc;
    }
  }
}

}  // namespace chainflow::kernels::avx2
