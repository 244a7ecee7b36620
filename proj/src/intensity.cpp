// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/intensity.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "chainflow/errors.hpp"
#include "chainflow/workloads.hpp"

namespace chainflow {

__extension__ typedef unsigned __int128 u128;

Rational Rational::reduced() const {
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? *this : Rational{num / g, den / g};
}

bool operator==(const Rational& a, const Rational& b) {
  return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const u128 l = static_cast<u128>(a.num) * b.den;
  const u128 r = static_cast<u128>(b.num) * a.den;
  return l <=> r;
}

IntensityReport ai_gemm(std::uint64_t M, std::uint64_t K, std::uint64_t N) {
  if (M == 0 || K == 0 || N == 0) throw ValidationError("GEMM shapes must be positive");
  return {M * K * N, M * K + K * N + M * N};
}

IntensityReport ai_spmm(std::uint64_t M, std::uint64_t K, std::uint64_t N, std::uint64_t nnz) {
  if (M == 0 || K == 0 || N == 0 || nnz == 0) {
    throw ValidationError("SpMM shapes must be positive");
  }
  if (nnz > M * K) throw ValidationError("nnz exceeds M*K");
  return {nnz * N, 2 * nnz + M + N * K + M * N};
}

Words node_macs(const EinsumNode& node) {
  const TensorRef* sparse = nullptr;
  for (const auto& in : node.inputs) {
    if (in.sparse) {
      sparse = &in;
      break;
    }
  }
  Words macs = sparse ? *sparse->nnz : 1;
  for (const auto& r : node.ranks) {
    if (sparse && std::find(sparse->ranks.begin(), sparse->ranks.end(), r.name) !=
                      sparse->ranks.end()) {
      continue;
    }
    macs *= r.size;
  }
  return macs;
}

IntensityReport ai_chain(const TensorDag& dag, ChainMode mode) {
  IntensityReport rep;
  for (const auto& n : dag.nodes) rep.multiplications += node_macs(n);

  if (mode == ChainMode::isolated) {
    for (const auto& n : dag.nodes) {
      std::set<std::string> seen;
      for (const auto& in : n.inputs) {
        if (seen.insert(in.name).second) rep.accesses += tensor_words(n, in);
      }
      if (seen.insert(n.output.name).second) rep.accesses += tensor_words(n, n.output);
    }
    return rep;
  }

  std::set<std::string> produced;
  for (const auto& n : dag.nodes) produced.insert(n.output.name);
  std::set<std::string> counted;
  for (int id : dag.schedule) {
    const auto& n = dag.node(id);
    for (const auto& in : n.inputs) {
      if (!produced.count(in.name) && counted.insert(in.name).second) {
        rep.accesses += tensor_words(n, in);
      }
    }
  }
  for (const auto& n : dag.nodes) {
    if (dag.is_output(n.output.name)) rep.accesses += tensor_words(n, n.output);
  }
  return rep;
}

IntensityReport ai_cg(std::uint64_t M, std::uint64_t nnz, std::uint64_t N, int iters) {
  return ai_chain(build_cg_dag(M, N, nnz, iters), ChainMode::fused);
}

std::string intensity_csv(const std::vector<IntensityRow>& rows) {
  std::ostringstream os;
  os << "workload,M,K,N,nnz,mode,macs,words,ai\n";
  for (const auto& r : rows) {
    char ai[64];
    std::snprintf(ai, sizeof ai, "%.6f", r.report.ai().value());
    os << r.workload << ',' << r.M << ',' << r.K << ',' << r.N << ',' << r.nnz << ',' << r.mode
       << ',' << r.report.multiplications << ',' << r.report.accesses << ',' << ai << '\n';
  }
  return os.str();
}

std::string_view to_string(ChainMode m) {
  return m == ChainMode::isolated ? "isolated" : "fused";
}

ChainMode parse_chain_mode(std::string_view s) {
  if (s == "isolated") return ChainMode::isolated;
  if (s == "fused") return ChainMode::fused;
  throw ValidationError("unknown intensity mode '" + std::string(s) + "'");
}

}  // namespace chainflow
