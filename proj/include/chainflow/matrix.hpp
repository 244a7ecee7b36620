// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace chainflow {

struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_starts{0};
  std::vector<std::size_t> col_ids;
  std::vector<double> values;

  std::size_t nnz() const { return col_ids.size(); }
  /// Throws ValidationError when the CSR invariants do not hold.
  void validate() const;
};

/// Row-major.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

double frobenius_norm(const DenseMatrix& m);

/// Comma-separated, one row per line.
DenseMatrix read_dense_csv(std::istream& in);
void write_dense_csv(std::ostream& out, const DenseMatrix& m);

/// "DMX1", u64 rows, u64 cols, then rows*cols f64; all little-endian.
DenseMatrix read_dense_binary(std::istream& in);
void write_dense_binary(std::ostream& out, const DenseMatrix& m);

/// Picks the format from the extension (.csv, otherwise binary).
DenseMatrix load_dense(const std::string& path);
void save_dense(const std::string& path, const DenseMatrix& m);

}  // namespace chainflow
