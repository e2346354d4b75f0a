#pragma once

// Dense exact linear algebra over any field type with +,-,*, is_zero and
// inverse (rationals, cyclotomic elements, number-field elements).  Matrices
// are row-major vectors of rows.  Everything is deterministic: pivots are
// chosen as the first usable row.

#include "eiscong/poly.hpp"

#include <functional>

namespace eiscong {

template <class F>
using Vec = std::vector<F>;
template <class F>
using Mat = std::vector<std::vector<F>>;

template <class F>
Mat<F> mat_zero(size_t r, size_t c) {
  return Mat<F>(r, Vec<F>(c, F(0)));
}

template <class F>
Mat<F> mat_identity(size_t n) {
  Mat<F> I = mat_zero<F>(n, n);
  for (size_t i = 0; i < n; ++i) I[i][i] = F(1);
  return I;
}

template <class F>
Mat<F> mat_mul(const Mat<F>& a, const Mat<F>& b) {
  size_t r = a.size(), m = b.size(), c = b.empty() ? 0 : b[0].size();
  Mat<F> out = mat_zero<F>(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t k = 0; k < m; ++k) {
      if (is_zero(a[i][k])) continue;
      for (size_t j = 0; j < c; ++j) out[i][j] = out[i][j] + a[i][k] * b[k][j];
    }
  return out;
}

template <class F>
Vec<F> mat_vec(const Mat<F>& a, const Vec<F>& v) {
  Vec<F> out(a.size(), F(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < v.size(); ++k)
      if (!is_zero(a[i][k]) && !is_zero(v[k])) out[i] = out[i] + a[i][k] * v[k];
  return out;
}

template <class F>
Vec<F> vec_mat(const Vec<F>& v, const Mat<F>& a) {
  size_t c = a.empty() ? 0 : a[0].size();
  Vec<F> out(c, F(0));
  for (size_t k = 0; k < a.size(); ++k) {
    if (is_zero(v[k])) continue;
    for (size_t j = 0; j < c; ++j) out[j] = out[j] + v[k] * a[k][j];
  }
  return out;
}

template <class F>
bool vec_is_zero(const Vec<F>& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

// In-place reduced row echelon form; returns the pivot column list.
template <class F>
std::vector<size_t> mat_rref(Mat<F>& m) {
  std::vector<size_t> pivots;
  size_t rows = m.size(), cols = rows ? m[0].size() : 0, rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t sel = rank;
    while (sel < rows && is_zero(m[sel][col])) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[rank]);
    F inv = inverse(m[rank][col]);
    for (size_t j = col; j < cols; ++j) m[rank][j] = m[rank][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || is_zero(m[i][col])) continue;
      F f = m[i][col];
      for (size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[rank][j];
    }
    pivots.push_back(col);
    ++rank;
  }
  m.resize(rank, Vec<F>(cols, F(0)));
  return pivots;
}

// Basis of the right kernel (column vectors) of m.
template <class F>
Mat<F> mat_kernel(Mat<F> m) {
  size_t cols = m.empty() ? 0 : m[0].size();
  auto pivots = mat_rref(m);
  std::vector<char> is_pivot(cols, 0);
  for (size_t p : pivots) is_pivot[p] = 1;
  Mat<F> kernel;  // one row per kernel basis vector (transposed view)
  for (size_t freec = 0; freec < cols; ++freec) {
    if (is_pivot[freec]) continue;
    Vec<F> v(cols, F(0));
    v[freec] = F(1);
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m[r][freec];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// Solve A x = b for one solution; A given in rref form with pivot list.
template <class F>
Vec<F> rref_solve(const Mat<F>& rref, const std::vector<size_t>& pivots, const Vec<F>& b_reduced) {
  size_t cols = rref.empty() ? 0 : rref[0].size();
  Vec<F> x(cols, F(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = b_reduced[r];
  return x;
}

// Express b in the span of given columns: returns coefficients or empty.
// cols_matrix: each entry a column vector of length n.
template <class F>
struct ColumnSolver {
  Mat<F> rref;                  // rref of [cols | I] augmented? kept simple: of cols^T
  std::vector<size_t> pivots;
  Mat<F> cols;                  // original columns
  size_t n = 0;

  explicit ColumnSolver(const Mat<F>& columns) : cols(columns) {
    n = columns.empty() ? 0 : columns[0].size();
    // build matrix with columns as columns: rows n, cols k, then append identity
    size_t k = columns.size();
    Mat<F> m = mat_zero<F>(n, k + n);
    for (size_t j = 0; j < k; ++j)
      for (size_t i = 0; i < n; ++i) m[i][j] = columns[j][i];
    for (size_t i = 0; i < n; ++i) m[i][k + i] = F(1);
    pivots = mat_rref(m);
    rref = std::move(m);
  }

  // returns x with sum_j x[j] cols[j] = b; throws if inconsistent
  Vec<F> solve(const Vec<F>& b) const {
    size_t k = cols.size();
    // reduce b with the recorded row operations: rref rows are [R | T] with
    // R = T * original, so T*b gives the reduced right-hand side
    Vec<F> x(k, F(0));
    Vec<F> rb(rref.size(), F(0));
    for (size_t r = 0; r < rref.size(); ++r) {
      F acc = F(0);
      for (size_t i = 0; i < n; ++i)
        if (!is_zero(rref[r][k + i]) && !is_zero(b[i])) acc = acc + rref[r][k + i] * b[i];
      rb[r] = acc;
    }
    for (size_t r = 0; r < pivots.size(); ++r) {
      if (pivots[r] < k) {
        x[pivots[r]] = rb[r];
      } else if (!is_zero(rb[r])) {
        throw Error("ColumnSolver: vector not in span");
      }
    }
    // rows beyond pivot count are zero rows; consistency needs T*b zero there
    for (size_t r = pivots.size(); r < rb.size(); ++r)
      if (!is_zero(rb[r])) throw Error("ColumnSolver: vector not in span");
    return x;
  }
};

// Characteristic polynomial over a field via the Hessenberg recurrence;
// coefficients returned constant term first, monic.
template <class F>
PolyV<F> charpoly_hessenberg(Mat<F> h) {
  size_t n = h.size();
  // reduce to upper Hessenberg by similarity
  for (size_t m = 1; m + 1 <= n; ++m) {
    // find pivot in column m-1 below row m
    size_t piv = m;
    while (piv < n && is_zero(h[piv][m - 1])) ++piv;
    if (piv == n) continue;
    if (piv != m) {
      std::swap(h[piv], h[m]);
      for (size_t i = 0; i < n; ++i) std::swap(h[i][piv], h[i][m]);
    }
    F inv = inverse(h[m][m - 1]);
    for (size_t i = m + 1; i < n; ++i) {
      if (is_zero(h[i][m - 1])) continue;
      F u = h[i][m - 1] * inv;
      for (size_t j = 0; j < n; ++j) h[i][j] = h[i][j] - u * h[m][j];
      for (size_t j = 0; j < n; ++j) h[j][m] = h[j][m] + u * h[j][i];
    }
  }
  // p_m(x) = (x - h[m-1][m-1]) p_{m-1}(x) - sum_{i} h[i-1][m-1] (prod subdiag) p_{i-1}(x)
  std::vector<PolyV<F>> p(n + 1);
  p[0] = PolyV<F>{F(1)};
  for (size_t m = 1; m <= n; ++m) {
    PolyV<F> t = poly_mul(p[m - 1], PolyV<F>{-h[m - 1][m - 1], F(1)});
    F prod = F(1);
    for (size_t i = m - 1; i >= 1; --i) {
      prod = prod * h[i][i - 1];
      if (!is_zero(h[i - 1][m - 1]) && !is_zero(prod))
        t = poly_sub(t, poly_scale(p[i - 1], F(h[i - 1][m - 1] * prod)));
    }
    p[m] = std::move(t);
  }
  return p[n];
}

}  // namespace eiscong
