#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/sparse/csr.hpp"
#include "wentzell/sparse/ordering.hpp"

namespace wentzell {

struct LuOptions {
  /// A pivot column whose largest candidate is below this fraction of max|A| is singular.
  double pivot_tolerance = 1e-12;
  /// Apply reverse Cuthill-McKee before factoring.
  bool reorder = true;
};

/// P A Q = L U with L unit lower triangular and U upper triangular.
///
/// Q is the fill-reducing column ordering (RCM, applied symmetrically before
/// elimination); P combines that ordering with the row interchanges of
/// partial pivoting. Elimination runs on variable-length row segments, so the
/// work is bounded by the band profile of the reordered matrix.
class LuFactorization {
 public:
  static LuFactorization factor(const CsrMatrix& a, const LuOptions& opt = {}) {
    if (a.nrows() != a.ncols()) throw InvalidArgument("lu_factor: matrix not square");
    const std::size_t n = a.nrows();
    LuFactorization f;
    f.n_ = n;
    f.a_max_ = a.max_abs();

    std::vector<std::size_t> q(n);
    std::iota(q.begin(), q.end(), 0);
    if (opt.reorder && n > 0) q = reverse_cuthill_mckee(a);
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[q[i]] = i;

    struct Row {
      std::size_t start = 0;
      std::vector<cplx> v;  // columns [start, start + v.size())
      std::size_t end() const { return start + v.size(); }
    };
    std::vector<Row> rows(n);
    std::vector<std::size_t> origin(n);
    std::size_t kl = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = q[i];
      std::size_t lo = i, hi = i;
      for (std::size_t k = a.row_ptr()[src]; k < a.row_ptr()[src + 1]; ++k) {
        lo = std::min(lo, inv[a.col_idx()[k]]);
        hi = std::max(hi, inv[a.col_idx()[k]]);
      }
      rows[i].start = lo;
      rows[i].v.assign(hi - lo + 1, 0.0);
      for (std::size_t k = a.row_ptr()[src]; k < a.row_ptr()[src + 1]; ++k)
        rows[i].v[inv[a.col_idx()[k]] - lo] = a.values()[k];
      kl = std::max(kl, i - lo);
      origin[i] = i;
    }

    const double tol = opt.pivot_tolerance * std::max(f.a_max_, std::numeric_limits<double>::min());
    double u_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t last = std::min(n - 1, k + kl);
      std::size_t piv = k;
      double best = -1.0;
      for (std::size_t r = k; r <= last; ++r) {
        const Row& row = rows[r];
        if (row.start > k || row.end() <= k) continue;
        const double m = std::abs(row.v[k - row.start]);
        if (m > best) {
          best = m;
          piv = r;
        }
      }
      if (!(best > tol)) throw SingularMatrix(k, std::max(best, 0.0));
      if (piv != k) {
        std::swap(rows[k], rows[piv]);
        std::swap(origin[k], origin[piv]);
      }
      const Row& prow = rows[k];
      const cplx pivot = prow.v[k - prow.start];
      for (std::size_t r = k + 1; r <= last; ++r) {
        Row& row = rows[r];
        if (row.start > k || row.end() <= k) continue;
        cplx& slot = row.v[k - row.start];
        if (slot == cplx{0.0, 0.0}) continue;
        const cplx m = slot / pivot;
        slot = m;
        if (row.end() < prow.end()) row.v.resize(prow.end() - row.start, 0.0);
        for (std::size_t j = k + 1; j < prow.end(); ++j)
          row.v[j - row.start] -= m * prow.v[j - prow.start];
      }
      for (std::size_t j = k; j < prow.end(); ++j) u_max = std::max(u_max, std::abs(prow.v[j - prow.start]));
    }

    std::vector<Triplet> lt, ut;
    for (std::size_t i = 0; i < n; ++i) {
      const Row& row = rows[i];
      for (std::size_t j = row.start; j < row.end(); ++j) {
        const cplx val = row.v[j - row.start];
        if (val == cplx{0.0, 0.0}) continue;
        (j < i ? lt : ut).push_back({i, j, val});
      }
    }
    f.lower_ = CsrMatrix::from_triplets(n, n, std::move(lt));
    f.upper_ = CsrMatrix::from_triplets(n, n, std::move(ut));
    f.row_perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.row_perm_[i] = q[origin[i]];
    f.col_perm_ = q;
    f.growth_ = f.a_max_ > 0.0 ? u_max / f.a_max_ : 0.0;
    f.lower_bandwidth_ = kl;
    return f;
  }

  Vector solve(std::span<const cplx> b) const {
    require_same_size(b.size(), n_, "lu_solve");
    Vector z(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      cplx s = b[row_perm_[i]];
      for (std::size_t k = lower_.row_ptr()[i]; k < lower_.row_ptr()[i + 1]; ++k)
        s -= lower_.values()[k] * z[lower_.col_idx()[k]];
      z[i] = s;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      cplx s = z[ii];
      cplx diag = 0.0;
      for (std::size_t k = upper_.row_ptr()[ii]; k < upper_.row_ptr()[ii + 1]; ++k) {
        const std::size_t j = upper_.col_idx()[k];
        if (j == ii) diag = upper_.values()[k];
        else s -= upper_.values()[k] * z[j];
      }
      z[ii] = s / diag;
    }
    Vector x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[col_perm_[j]] = z[j];
    return x;
  }

  std::size_t size() const noexcept { return n_; }
  /// Row i of P A Q is row row_permutation()[i] of A.
  const std::vector<std::size_t>& row_permutation() const noexcept { return row_perm_; }
  /// Column j of P A Q is column column_permutation()[j] of A.
  const std::vector<std::size_t>& column_permutation() const noexcept { return col_perm_; }
  const CsrMatrix& lower() const noexcept { return lower_; }
  const CsrMatrix& upper() const noexcept { return upper_; }
  /// max|U| / max|A|.
  double pivot_growth() const noexcept { return growth_; }
  std::size_t lower_bandwidth() const noexcept { return lower_bandwidth_; }
  double matrix_max_abs() const noexcept { return a_max_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_perm_, col_perm_;
  CsrMatrix lower_, upper_;
  double growth_ = 0.0;
  double a_max_ = 0.0;
  std::size_t lower_bandwidth_ = 0;
};

inline LuFactorization lu_factor(const CsrMatrix& a, const LuOptions& opt = {}) {
  return LuFactorization::factor(a, opt);
}

inline Vector lu_solve(const LuFactorization& f, std::span<const cplx> b) { return f.solve(b); }

/// max_ij |(P A Q - L U)_ij|, computed row by row without forming dense matrices.
inline double factorization_residual(const CsrMatrix& a, const LuFactorization& f) {
  const std::size_t n = f.size();
  const auto& L = f.lower();
  const auto& U = f.upper();
  std::vector<std::size_t> qinv(n);
  for (std::size_t j = 0; j < n; ++j) qinv[f.column_permutation()[j]] = j;
  std::vector<cplx> acc(n, 0.0);
  std::vector<char> mark(n, 0);
  std::vector<std::size_t> touched;
  double worst = 0.0;
  auto add_row_of_u = [&](std::size_t r, cplx scale) {
    for (std::size_t k = U.row_ptr()[r]; k < U.row_ptr()[r + 1]; ++k) {
      const std::size_t j = U.col_idx()[k];
      if (!mark[j]) {
        mark[j] = 1;
        touched.push_back(j);
      }
      acc[j] += scale * U.values()[k];
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    add_row_of_u(i, 1.0);
    for (std::size_t k = L.row_ptr()[i]; k < L.row_ptr()[i + 1]; ++k)
      add_row_of_u(L.col_idx()[k], L.values()[k]);
    const std::size_t src = f.row_permutation()[i];
    for (std::size_t k = a.row_ptr()[src]; k < a.row_ptr()[src + 1]; ++k) {
      const std::size_t j = qinv[a.col_idx()[k]];
      if (!mark[j]) {
        mark[j] = 1;
        touched.push_back(j);
      }
      acc[j] -= a.values()[k];
    }
    for (auto j : touched) {
      worst = std::max(worst, std::abs(acc[j]));
      acc[j] = 0.0;
      mark[j] = 0;
    }
    touched.clear();
  }
  return worst;
}

}  // namespace wentzell
