#pragma once

// Sparse rank-preserving projections: an n x r matrix with two nonzeros per
// row and at most 2*ceil(n/r) per column. For a fixed A of rank rho, M^T A N
// has rank min(rho, r/4) with constant probability.

#include <array>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

inline constexpr Index kSketchFactor = 4;  // r = 4k
inline constexpr Index kMinLevelK = 8;     // k0

/// r = min(4k, n), but at least 2 so that rows can hold two distinct columns.
Index sketch_dimension(Index n, Index k);

/// ceil(log2 n) + 2 independent copies.
Index boost_count(Index n);

Index ceil_log2(Index n);

struct SketchMatrix {
  Index n = 0;
  Index r = 0;
  std::vector<std::array<Index, 2>> cols;  // per row: the two column positions
  std::vector<std::array<Fp, 2>> vals;     // per row: their nonzero values

  Matrix dense() const;
  std::vector<Index> column_counts() const;
  Index column_cap() const { return 2 * ((n + r - 1) / r); }
};

SketchMatrix build_sketch(Index n, Index k, gf::Rng& rng);

/// A * M in O(nnz(A)).
template <class Derived>
Matrix apply_right(const Eigen::MatrixBase<Derived>& A, const SketchMatrix& M) {
  if (A.cols() != M.n) throw Error(Errc::dimension_mismatch, "apply_right");
  Matrix out = zeros(A.rows(), M.r);
  for (Index i = 0; i < M.n; ++i) {
    const Vector col = A.col(i);
    const auto& c = M.cols[static_cast<std::size_t>(i)];
    const auto& v = M.vals[static_cast<std::size_t>(i)];
    for (int s = 0; s < 2; ++s) kernel::axpy(out.col(c[s]).data(), col.data(), v[s], A.rows());
  }
  return out;
}

/// M^T * A in O(nnz(A)).
template <class Derived>
Matrix apply_left(const SketchMatrix& M, const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != M.n) throw Error(Errc::dimension_mismatch, "apply_left");
  Matrix out = zeros(M.r, A.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < M.n; ++i) {
      const Fp a = A(i, j);
      if (a.is_zero()) continue;
      const auto& c = M.cols[static_cast<std::size_t>(i)];
      const auto& v = M.vals[static_cast<std::size_t>(i)];
      out(c[0], j) += v[0] * a;
      out(c[1], j) += v[1] * a;
    }
  }
  return out;
}

/// M^T v for sparse v; the result is sparse with at most 2 nnz(v) entries.
SparseVector project(const SketchMatrix& M, const SparseVector& v);

struct ColumnDelta {
  Index column;
  SparseVector delta;
};

/// Effect of A <- A + v e_i^T on the product M^T A N: at most two column
/// deltas, one per nonzero of row i of N. Empty when M^T v = 0.
std::vector<ColumnDelta> propagate_column_update(const SketchMatrix& M, const SketchMatrix& N,
                                                 Index i, const SparseVector& v);

}  // namespace dynrank
