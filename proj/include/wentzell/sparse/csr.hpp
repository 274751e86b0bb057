#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/sparse/vector_ops.hpp"

namespace wentzell {

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Compressed sparse row matrix with complex entries.
///
/// After construction the column indices of every row are strictly increasing
/// and no explicit zeros are stored. The object is immutable.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<cplx> values)
      : nrows_(nrows), ncols_(ncols), row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)), values_(std::move(values)) {
    validate();
  }

  /// Sums duplicate entries and drops entries that end up exactly zero.
  static CsrMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                 std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
      if (t.row >= nrows || t.col >= ncols)
        throw InvalidArgument("triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> row_ptr(nrows + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<cplx> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    std::size_t k = 0;
    while (k < triplets.size()) {
      const std::size_t r = triplets[k].row;
      const std::size_t c = triplets[k].col;
      cplx sum = 0.0;
      while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c)
        sum += triplets[k++].value;
      if (sum != cplx{0.0, 0.0}) {
        cols.push_back(c);
        vals.push_back(sum);
        ++row_ptr[r + 1];
      }
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    return CsrMatrix(nrows, ncols, std::move(row_ptr), std::move(cols), std::move(vals));
  }

  static CsrMatrix identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
  }

  static CsrMatrix zero(std::size_t nrows, std::size_t ncols) {
    return CsrMatrix(nrows, ncols, std::vector<std::size_t>(nrows + 1, 0), {}, {});
  }

  static CsrMatrix diagonal(std::span<const cplx> d) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return from_triplets(d.size(), d.size(), std::move(t));
  }

  /// Row-major dense input; entries equal to zero are not stored.
  static CsrMatrix from_dense(std::size_t nrows, std::size_t ncols, std::span<const cplx> a) {
    require_same_size(a.size(), nrows * ncols, "CsrMatrix::from_dense");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j)
        if (a[i * ncols + j] != cplx{0.0, 0.0}) t.push_back({i, j, a[i * ncols + j]});
    return from_triplets(nrows, ncols, std::move(t));
  }

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<cplx>& values() const noexcept { return values_; }

  cplx at(std::size_t i, std::size_t j) const {
    if (i >= nrows_ || j >= ncols_) throw InvalidArgument("CsrMatrix::at out of range");
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  Vector diagonal_entries() const {
    Vector d(std::min(nrows_, ncols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
    return d;
  }

  Vector row_sums() const {
    Vector s(nrows_, 0.0);
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s[i] += values_[k];
    return s;
  }

  /// Conjugate transpose.
  CsrMatrix adjoint() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        t.push_back({col_idx_[k], i, std::conj(values_[k])});
    return from_triplets(ncols_, nrows_, std::move(t));
  }

  CsrMatrix scaled(cplx a) const {
    if (a == cplx{0.0, 0.0}) return zero(nrows_, ncols_);
    std::vector<cplx> v(values_);
    for (auto& x : v) x *= a;
    return CsrMatrix(nrows_, ncols_, row_ptr_, col_idx_, std::move(v));
  }

  CsrMatrix real_part() const {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        t.push_back({i, col_idx_[k], values_[k].real()});
    return from_triplets(nrows_, ncols_, std::move(t));
  }

  /// Rows `rows` and columns `cols` (both given as index lists, in that order).
  CsrMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    std::vector<std::ptrdiff_t> col_map(ncols_, -1);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] >= ncols_) throw InvalidArgument("submatrix column out of range");
      col_map[cols[j]] = static_cast<std::ptrdiff_t>(j);
    }
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::size_t i = rows[r];
      if (i >= nrows_) throw InvalidArgument("submatrix row out of range");
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_map[col_idx_[k]] >= 0)
          t.push_back({r, static_cast<std::size_t>(col_map[col_idx_[k]]), values_[k]});
    }
    return from_triplets(rows.size(), cols.size(), std::move(t));
  }

  /// Row-major dense copy; for tests and small fixtures only.
  std::vector<cplx> to_dense() const {
    std::vector<cplx> a(nrows_ * ncols_, 0.0);
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        a[i * ncols_ + col_idx_[k]] = values_[k];
    return a;
  }

  bool is_hermitian(double rel_tol = 1e-14) const {
    if (nrows_ != ncols_) return false;
    const double tol = rel_tol * std::max(max_abs(), 1e-300);
    for (std::size_t i = 0; i < nrows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (std::abs(values_[k] - std::conj(at(col_idx_[k], i))) > tol) return false;
    return true;
  }

 private:
  void validate() const {
    if (row_ptr_.size() != nrows_ + 1) throw ValidationError("CSR: row_ptr has wrong length");
    if (row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
        col_idx_.size() != values_.size())
      throw ValidationError("CSR: inconsistent array lengths");
    for (std::size_t i = 0; i < nrows_; ++i) {
      if (row_ptr_[i] > row_ptr_[i + 1]) throw ValidationError("CSR: row_ptr not monotone");
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (col_idx_[k] >= ncols_) throw ValidationError("CSR: column index out of range");
        if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
          throw ValidationError("CSR: columns not strictly increasing in row " + std::to_string(i));
        if (values_[k] == cplx{0.0, 0.0}) throw ValidationError("CSR: explicit zero stored");
      }
    }
  }

  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<cplx> values_;
};

/// y = A x, one pass over the rows in storage order.
inline Vector spmv(const CsrMatrix& a, std::span<const cplx> x) {
  require_same_size(a.ncols(), x.size(), "spmv");
  Vector y(a.nrows(), 0.0);
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    cplx s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
    y[i] = s;
  }
  return y;
}

/// alpha A + beta B on the union of both patterns.
inline CsrMatrix linear_combination(cplx alpha, const CsrMatrix& a, cplx beta, const CsrMatrix& b) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
    throw InvalidArgument("linear_combination: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      t.push_back({i, a.col_idx()[k], alpha * a.values()[k]});
    for (std::size_t k = b.row_ptr()[i]; k < b.row_ptr()[i + 1]; ++k)
      t.push_back({i, b.col_idx()[k], beta * b.values()[k]});
  }
  return CsrMatrix::from_triplets(a.nrows(), a.ncols(), std::move(t));
}

inline CsrMatrix operator+(const CsrMatrix& a, const CsrMatrix& b) {
  return linear_combination(1.0, a, 1.0, b);
}

inline CsrMatrix operator-(const CsrMatrix& a, const CsrMatrix& b) {
  return linear_combination(1.0, a, -1.0, b);
}

/// v^* A u.
inline cplx quadratic_form(const CsrMatrix& a, std::span<const cplx> v, std::span<const cplx> u) {
  return dot(v, spmv(a, u));
}

}  // namespace wentzell
