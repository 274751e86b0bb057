#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/sparse/csr.hpp"

namespace wentzell {

/// Writes `%%MatrixMarket matrix coordinate complex general`, 1-based indices.
inline void write_matrix_market(std::ostream& os, const CsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  char buf[96];
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g\n", i + 1, a.col_idx()[k] + 1,
                    a.values()[k].real(), a.values()[k].imag());
      os << buf;
    }
}

inline void write_matrix_market(const std::string& path, const CsrMatrix& a) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  write_matrix_market(os, a);
}

/// Reads coordinate matrices with field real/complex/integer and symmetry
/// general/symmetric/hermitian.
inline CsrMatrix read_matrix_market(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ParseError(1, "empty matrix-market stream");
  ++lineno;
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
    throw ParseError(lineno, "expected '%%MatrixMarket matrix coordinate ...'");
  const bool is_complex = field == "complex";
  if (!is_complex && field != "real" && field != "integer")
    throw ParseError(lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian")
    throw ParseError(lineno, "unsupported symmetry '" + symmetry + "'");

  std::size_t nr = 0, nc = 0, nz = 0;
  bool have_size = false;
  std::vector<Triplet> t;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!have_size) {
      if (!(ls >> nr >> nc >> nz)) throw ParseError(lineno, "bad size line");
      have_size = true;
      continue;
    }
    std::size_t i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> i >> j >> re)) throw ParseError(lineno, "bad entry line");
    if (is_complex && !(ls >> im)) throw ParseError(lineno, "missing imaginary part");
    if (i < 1 || j < 1 || i > nr || j > nc) throw ParseError(lineno, "index out of range");
    const cplx v{re, im};
    t.push_back({i - 1, j - 1, v});
    if (i != j && symmetry == "symmetric") t.push_back({j - 1, i - 1, v});
    if (i != j && symmetry == "hermitian") t.push_back({j - 1, i - 1, std::conj(v)});
  }
  if (!have_size) throw ParseError(lineno, "missing size line");
  return CsrMatrix::from_triplets(nr, nc, std::move(t));
}

inline CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open " + path);
  return read_matrix_market(is);
}

}  // namespace wentzell
