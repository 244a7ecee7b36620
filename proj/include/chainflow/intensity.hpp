// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "chainflow/ir.hpp"

namespace chainflow {

/// Non-negative rational kept unreduced; comparisons are exact.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational reduced() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
};

struct IntensityReport {
  Words multiplications = 0;
  Words accesses = 0;

  Rational ai() const { return {multiplications, accesses}; }
};

IntensityReport ai_gemm(std::uint64_t M, std::uint64_t K, std::uint64_t N);
/// CSR operand counted as 2*nnz + M words.
IntensityReport ai_spmm(std::uint64_t M, std::uint64_t K, std::uint64_t N, std::uint64_t nnz);

enum class ChainMode { isolated, fused };

/// MAC count of one node: product of rank sizes, with a sparse operand's
/// ranks replaced by its nnz. Inverse nodes count as their Einsum equivalent.
Words node_macs(const EinsumNode& node);

/// isolated: each node reads its distinct operands and writes its output.
/// fused: tensors no node produces are read once, dag.outputs written once.
IntensityReport ai_chain(const TensorDag& dag, ChainMode mode);

/// Fused intensity of the unrolled block-CG chain.
IntensityReport ai_cg(std::uint64_t M, std::uint64_t nnz, std::uint64_t N, int iters);

struct IntensityRow {
  std::string workload;
  std::uint64_t M = 0, K = 0, N = 0, nnz = 0;
  std::string mode;
  IntensityReport report;
};

/// Columns workload,M,K,N,nnz,mode,macs,words,ai.
std::string intensity_csv(const std::vector<IntensityRow>& rows);

std::string_view to_string(ChainMode m);
ChainMode parse_chain_mode(std::string_view s);

}  // namespace chainflow
