// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainflow/errors.hpp"
#include "chainflow/matrix.hpp"

namespace chainflow {

class HeaderError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class IndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct CooEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const CooEntry&, const CooEntry&) = default;
};

struct CooMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<CooEntry> entries;  // 0-based
};

/// Coordinate format, real/integer/pattern, general/symmetric. Symmetric
/// off-diagonal entries are mirrored; pattern entries get value 1.
CooMatrix parse_matrix_market(std::istream& in);
CooMatrix read_matrix_market(const std::string& path);

/// Sorted by (row, col) with duplicates summed.
CsrMatrix coo_to_csr(const CooMatrix& coo);
CooMatrix csr_to_coo(const CsrMatrix& csr);

/// Writes `coordinate real general`, 1-based, 17 significant digits.
void write_matrix_market(std::ostream& out, const CooMatrix& coo);

struct MatrixStats {
  std::uint64_t M = 0;
  std::uint64_t nnz = 0;
  double nz_av = 0.0;
  bool symmetric = false;
};

/// Symmetry is structural plus numeric within 1e-12 relative.
MatrixStats matrix_stats(const CsrMatrix& csr);

}  // namespace chainflow
