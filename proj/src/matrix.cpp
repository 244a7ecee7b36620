// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/matrix.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chainflow/errors.hpp"

namespace chainflow {

void CsrMatrix::validate() const {
  if (row_starts.size() != rows + 1) throw ValidationError("CSR row_starts has wrong length");
  if (row_starts.front() != 0 || row_starts.back() != col_ids.size()) {
    throw ValidationError("CSR row_starts does not span the entries");
  }
  if (values.size() != col_ids.size()) throw ValidationError("CSR values/col_ids length differ");
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_starts[i] > row_starts[i + 1]) throw ValidationError("CSR row_starts decreases");
  }
  for (auto c : col_ids) {
    if (c >= cols) throw ValidationError("CSR column index out of bounds");
  }
}

double frobenius_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.values) s += v * v;
  return std::sqrt(s);
}

DenseMatrix read_dense_csv(std::istream& in) {
  DenseMatrix m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t count = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double v = 0.0;
      auto [q, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw ValidationError("dense CSV line " + std::to_string(lineno) + ": bad number");
      }
      m.values.push_back(v);
      ++count;
      p = q;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      if (*p != ',') {
        throw ValidationError("dense CSV line " + std::to_string(lineno) + ": expected ','");
      }
      ++p;
    }
    if (m.rows == 0) {
      m.cols = count;
    } else if (count != m.cols) {
      throw ValidationError("dense CSV line " + std::to_string(lineno) + ": ragged row");
    }
    ++m.rows;
  }
  return m;
}

void write_dense_csv(std::ostream& out, const DenseMatrix& m) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j));
      if (j) out << ',';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
}

namespace {

constexpr char kMagic[4] = {'D', 'M', 'X', '1'};

template <class T>
T from_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
T read_le(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw ValidationError("dense binary: truncated file");
  }
  return from_le(v);
}

template <class T>
void write_le(std::ostream& out, T v) {
  v = from_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

DenseMatrix read_dense_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError("dense binary: bad magic");
  }
  const auto rows = read_le<std::uint64_t>(in);
  const auto cols = read_le<std::uint64_t>(in);
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    throw ValidationError("dense binary: implausible shape");
  }
  DenseMatrix m(rows, cols);
  for (auto& v : m.values) {
    v = std::bit_cast<double>(read_le<std::uint64_t>(in));
  }
  return m;
}

void write_dense_binary(std::ostream& out, const DenseMatrix& m) {
  out.write(kMagic, 4);
  write_le<std::uint64_t>(out, m.rows);
  write_le<std::uint64_t>(out, m.cols);
  for (double v : m.values) write_le(out, std::bit_cast<std::uint64_t>(v));
}

DenseMatrix load_dense(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return ends_with(path, ".csv") ? read_dense_csv(in) : read_dense_binary(in);
}

void save_dense(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  if (ends_with(path, ".csv")) {
    write_dense_csv(out, m);
  } else {
    write_dense_binary(out, m);
  }
}

}  // namespace chainflow
