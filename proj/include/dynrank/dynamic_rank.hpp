#pragma once

// Exact dynamic rank of a square matrix under column updates.
//
// Keeps A T = E with T invertible and E in reduced column form: every nonzero
// column c of E has a pivot row rho(c) with E(rho(c), c) = 1 and
// E(rho(c), c') = 0 for every other nonzero column c'. Pivot rows are not kept
// sorted. rank(A) = number of nonzero columns of E. An update costs O(n^2).

#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

class DynamicRank {
 public:
  DynamicRank() = default;
  explicit DynamicRank(const Matrix& A);
  /// Zero matrix of size n.
  explicit DynamicRank(Index n);

  Index size() const { return A_.rows(); }
  Index rank() const { return rank_; }

  /// A <- A + v e_i^T. Returns the new rank.
  Index column_update(Index i, const SparseVector& v);
  Index column_update(Index i, const Vector& v);
  /// A(i, j) <- value.
  Index entry_update(Index i, Index j, Fp value);
  /// Column i <- v.
  Index set_column(Index i, const Vector& v);

  const Matrix& matrix() const { return A_; }
  const Matrix& transform() const { return T_; }
  const Matrix& echelon() const { return E_; }
  /// Pivot row of column c of E, or -1 if the column is zero.
  Index pivot_row(Index c) const { return pivot_of_col_[static_cast<std::size_t>(c)]; }

  /// Full recheck of A T = E, the pivot pattern and invertibility of T.
  bool check_invariants() const;

 private:
  void check_column(Index i) const;
  // Reduce column c of (E, T) against all pivots, then make it a pivot
  // column or leave it null.
  void settle(Index c);
  void eliminate_into(Index target, Index source, Fp factor);

  Matrix A_, T_, E_;
  std::vector<Index> pivot_of_col_;
  std::vector<Index> col_of_row_;
  std::vector<Index> pivots_;  // the pivot columns, unordered
  Index rank_ = 0;
};

}  // namespace dynrank
