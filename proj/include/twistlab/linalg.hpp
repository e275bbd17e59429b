#pragma once

#include <optional>
#include <vector>

#include "twistlab/rational.hpp"

namespace twistlab {

// Reduced row echelon form in place; returns pivot column per row rank.
std::vector<int> rref(RatMat& m);

int rank(RatMat m);

// Particular solution of A x = b, if any.
std::optional<RatVec> solve_linear(const RatMat& A, const RatVec& b);

// Basis of the null space of A (columns = A's column count).
RatMat null_space(const RatMat& A, int cols);

// Affine solution set of A x = b: particular point plus null-space basis.
struct AffineSpace {
  RatVec point;
  RatMat basis;  // basis vectors of the homogeneous part
  int dim() const { return static_cast<int>(basis.size()); }
};
std::optional<AffineSpace> solve_affine(const RatMat& A, const RatVec& b, int cols);

Rational dot(const RatVec& a, const RatVec& b);

// Smith normal form of an integer matrix: U*A*V = D with U, V unimodular and
// D diagonal with divisibility down the diagonal. `cols` must be passed so
// empty systems keep their column count.
struct SmithForm {
  std::vector<std::vector<Integer>> U, V;
  std::vector<Integer> diag;  // length min(rows, cols)
  int rows = 0, cols = 0;
};
SmithForm smith_normal_form(std::vector<std::vector<Integer>> A, int cols);

}  // namespace twistlab
