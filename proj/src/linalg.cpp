#include "twistlab/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace twistlab {

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(RatMat m) { return static_cast<int>(rref(m).size()); }

std::optional<RatVec> solve_linear(const RatMat& A, const RatVec& b) {
  size_t rows = A.size();
  size_t cols = rows ? A[0].size() : b.size() * 0;
  if (rows == 0) return RatVec(cols, 0);
  RatMat aug(rows, RatVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = A[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<int> pivots = rref(aug);
  for (int p : pivots)
    if (p == static_cast<int>(cols)) return std::nullopt;  // 0 = 1 row
  RatVec x(cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

RatMat null_space(const RatMat& A, int cols) {
  RatMat m = A;
  for (auto& row : m)
    if (static_cast<int>(row.size()) != cols)
      throw std::logic_error("null_space: ragged matrix");
  std::vector<int> pivots = rref(m);
  std::vector<char> is_pivot(cols, 0);
  for (int p : pivots) is_pivot[p] = 1;
  RatMat basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, 0);
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSpace> solve_affine(const RatMat& A, const RatVec& b, int cols) {
  if (A.empty()) {
    AffineSpace s;
    s.point.assign(cols, 0);
    for (int i = 0; i < cols; ++i) {
      RatVec v(cols, 0);
      v[i] = 1;
      s.basis.push_back(std::move(v));
    }
    return s;
  }
  auto x = solve_linear(A, b);
  if (!x) return std::nullopt;
  AffineSpace s;
  s.point = *x;
  s.basis = null_space(A, cols);
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

using IMat = std::vector<std::vector<Integer>>;

IMat identity_mat(int n) {
  IMat m(n, std::vector<Integer>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace

SmithForm smith_normal_form(IMat A, int cols) {
  SmithForm out;
  out.rows = static_cast<int>(A.size());
  out.cols = cols;
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != cols)
      throw std::logic_error("smith_normal_form: ragged matrix");
  out.U = identity_mat(out.rows);
  out.V = identity_mat(out.cols);
  int n = std::min(out.rows, out.cols);

  auto row_op = [&](int dst, int src, const Integer& f) {
    for (int j = 0; j < out.cols; ++j) A[dst][j] -= f * A[src][j];
    for (int j = 0; j < out.rows; ++j) out.U[dst][j] -= f * out.U[src][j];
  };
  auto col_op = [&](int dst, int src, const Integer& f) {
    for (int i = 0; i < out.rows; ++i) A[i][dst] -= f * A[i][src];
    for (int i = 0; i < out.cols; ++i) out.V[i][dst] -= f * out.V[i][src];
  };
  auto swap_rows = [&](int a, int b) {
    std::swap(A[a], A[b]);
    std::swap(out.U[a], out.U[b]);
  };
  auto swap_cols = [&](int a, int b) {
    for (int i = 0; i < out.rows; ++i) std::swap(A[i][a], A[i][b]);
    for (int i = 0; i < out.cols; ++i) std::swap(out.V[i][a], out.V[i][b]);
  };
  auto negate_row = [&](int r) {
    for (int j = 0; j < out.cols; ++j) A[r][j] = -A[r][j];
    for (int j = 0; j < out.rows; ++j) out.U[r][j] = -out.U[r][j];
  };

  for (int t = 0; t < n; ++t) {
    // Find a nonzero pivot in the lower-right block.
    int pi = -1, pj = -1;
    for (int i = t; i < out.rows && pi < 0; ++i)
      for (int j = t; j < out.cols; ++j)
        if (A[i][j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    // Euclidean sweeps until the pivot divides its row and column.
    bool again = true;
    while (again) {
      again = false;
      for (int i = t + 1; i < out.rows; ++i) {
        if (A[i][t] == 0) continue;
        Integer q = A[i][t] / A[t][t];
        row_op(i, t, q);
        if (A[i][t] != 0) {
          swap_rows(t, i);
          again = true;
        }
      }
      for (int j = t + 1; j < out.cols; ++j) {
        if (A[t][j] == 0) continue;
        Integer q = A[t][j] / A[t][t];
        col_op(j, t, q);
        if (A[t][j] != 0) {
          swap_cols(t, j);
          again = true;
        }
      }
    }
    // Enforce divisibility into the remaining block.
    for (int i = t + 1; i < out.rows; ++i)
      for (int j = t + 1; j < out.cols; ++j)
        if (A[i][j] % A[t][t] != 0) {
          // Fold row i into row t and restart the sweep at this pivot.
          for (int jj = 0; jj < out.cols; ++jj) A[t][jj] += A[i][jj];
          for (int jj = 0; jj < out.rows; ++jj) out.U[t][jj] += out.U[i][jj];
          --t;
          i = out.rows;
          break;
        }
    if (t >= 0 && A[t][t] < 0) negate_row(t);
  }
  out.diag.resize(n);
  for (int i = 0; i < n; ++i) out.diag[i] = A[i][i];
  return out;
}

}  // namespace twistlab
