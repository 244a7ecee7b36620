// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "chainflow/matrix_market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace chainflow {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_num(std::string_view s, T& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

CooMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw HeaderError("empty Matrix Market stream");
  const auto head = split(line);
  if (head.empty() || lower(std::string(head[0])) != "%%matrixmarket") {
    throw HeaderError("missing %%MatrixMarket banner");
  }
  if (head.size() != 5) throw HeaderError("banner needs object, format, field and symmetry");
  const std::string object = lower(std::string(head[1]));
  const std::string format = lower(std::string(head[2]));
  const std::string field = lower(std::string(head[3]));
  const std::string symmetry = lower(std::string(head[4]));
  if (object != "matrix") throw HeaderError("object '" + object + "' is not 'matrix'");
  if (format == "array") throw UnsupportedError("array (dense) format is not supported");
  if (format != "coordinate") throw HeaderError("unknown format '" + format + "'");
  if (field == "complex") throw UnsupportedError("complex matrices are not supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw HeaderError("unknown field '" + field + "'");
  }
  if (symmetry == "hermitian" || symmetry == "skew-symmetric") {
    throw UnsupportedError(symmetry + " storage is not supported");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw HeaderError("unknown symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  std::size_t lineno = 1;
  bool have_size = false;
  CooMatrix coo;
  std::uint64_t declared = 0, seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    const auto tok = split(line);
    const std::string where = "line " + std::to_string(lineno);
    if (!have_size) {
      if (tok.size() != 3 || !parse_num(tok[0], coo.rows) || !parse_num(tok[1], coo.cols) ||
          !parse_num(tok[2], declared)) {
        throw DimensionError(where + ": expected 'rows cols nnz'");
      }
      if (symmetric && coo.rows != coo.cols) {
        throw DimensionError("symmetric matrix must be square");
      }
      coo.entries.reserve(symmetric ? 2 * declared : declared);
      have_size = true;
      continue;
    }
    if (++seen > declared) throw DimensionError(where + ": more entries than declared");
    std::uint64_t i = 0, j = 0;
    double v = 1.0;
    if (tok.size() != (pattern ? 2u : 3u) || !parse_num(tok[0], i) || !parse_num(tok[1], j) ||
        (!pattern && !parse_num(tok[2], v))) {
      throw DimensionError(where + ": malformed entry");
    }
    if (i < 1 || j < 1 || i > coo.rows || j > coo.cols) {
      throw IndexError(where + ": index (" + std::to_string(i) + "," + std::to_string(j) +
                       ") outside " + std::to_string(coo.rows) + "x" + std::to_string(coo.cols));
    }
    coo.entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) coo.entries.push_back({j - 1, i - 1, v});
  }
  if (!have_size) throw DimensionError("missing size line");
  if (seen != declared) {
    throw DimensionError("declared " + std::to_string(declared) + " entries, found " +
                         std::to_string(seen));
  }
  return coo;
}

CooMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse_matrix_market(in);
}

CsrMatrix coo_to_csr(const CooMatrix& coo) {
  std::vector<CooEntry> e = coo.entries;
  std::sort(e.begin(), e.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix csr;
  csr.rows = coo.rows;
  csr.cols = coo.cols;
  csr.row_starts.assign(coo.rows + 1, 0);
  for (std::size_t k = 0; k < e.size();) {
    const std::size_t r = e[k].row, c = e[k].col;
    if (r >= coo.rows || c >= coo.cols) throw IndexError("COO entry out of bounds");
    double v = 0.0;
    for (; k < e.size() && e[k].row == r && e[k].col == c; ++k) v += e[k].value;
    csr.col_ids.push_back(c);
    csr.values.push_back(v);
    ++csr.row_starts[r + 1];
  }
  for (std::size_t i = 0; i < coo.rows; ++i) csr.row_starts[i + 1] += csr.row_starts[i];
  return csr;
}

CooMatrix csr_to_coo(const CsrMatrix& csr) {
  CooMatrix coo;
  coo.rows = csr.rows;
  coo.cols = csr.cols;
  for (std::size_t i = 0; i < csr.rows; ++i) {
    for (std::size_t p = csr.row_starts[i]; p < csr.row_starts[i + 1]; ++p) {
      coo.entries.push_back({i, csr.col_ids[p], csr.values[p]});
    }
  }
  return coo;
}

void write_matrix_market(std::ostream& out, const CooMatrix& coo) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << coo.rows << ' ' << coo.cols << ' ' << coo.entries.size() << '\n';
  char buf[64];
  for (const auto& e : coo.entries) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
    out << e.row + 1 << ' ' << e.col + 1 << ' ';
    out.write(buf, end - buf);
    out << '\n';
  }
}

MatrixStats matrix_stats(const CsrMatrix& csr) {
  MatrixStats st;
  st.M = csr.rows;
  st.nnz = csr.nnz();
  st.nz_av = csr.rows ? static_cast<double>(st.nnz) / static_cast<double>(csr.rows) : 0.0;
  st.symmetric = csr.rows == csr.cols;
  for (std::size_t i = 0; st.symmetric && i < csr.rows; ++i) {
    for (std::size_t p = csr.row_starts[i]; p < csr.row_starts[i + 1]; ++p) {
      const std::size_t j = csr.col_ids[p];
      const auto b = csr.col_ids.begin() + static_cast<std::ptrdiff_t>(csr.row_starts[j]);
      const auto e = csr.col_ids.begin() + static_cast<std::ptrdiff_t>(csr.row_starts[j + 1]);
      const auto it = std::lower_bound(b, e, i);
      if (it == e || *it != i) {
        st.symmetric = false;
        break;
      }
      const double v = csr.values[p];
      const double w = csr.values[static_cast<std::size_t>(it - csr.col_ids.begin())];
      if (std::abs(v - w) > 1e-12 * std::max(std::abs(v), std::abs(w))) {
        st.symmetric = false;
        break;
      }
    }
  }
  return st;
}

}  // namespace chainflow
