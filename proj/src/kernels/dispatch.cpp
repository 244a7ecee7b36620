// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>

#include "chainflow/errors.hpp"
#include "chainflow/kernels.hpp"

namespace chainflow::kernels {

namespace {

Isa detect() { return avx2_available() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) {
    throw Error("AVX2/FMA kernels requested but the CPU does not support them");
  }
  current().store(isa, std::memory_order_relaxed);
}

void spmm(const CsrView& a, std::size_t n, const double* x, double* y) {
  if (active_isa() == Isa::avx2) {
    avx2::spmm(a, n, x, y);
  } else {
    scalar::spmm(a, n, x, y);
  }
}

void gemm_tn(std::size_t m, std::size_t n, const double* p, const double* s, double* c) {
  if (active_isa() == Isa::avx2) {
    avx2::gemm_tn(m, n, p, s, c);
  } else {
    scalar::gemm_tn(m, n, p, s, c);
  }
}

void update(std::size_t m, std::size_t n, const double* x, const double* p, const double* l,
            double sign, double* y) {
  if (active_isa() == Isa::avx2) {
    avx2::update(m, n, x, p, l, sign, y);
  } else {
    scalar::update(m, n, x, p, l, sign, y);
  }
}

}  // namespace chainflow::kernels
