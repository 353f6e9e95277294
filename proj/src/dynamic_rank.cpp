#include "dynrank/dynamic_rank.hpp"

#include <algorithm>

namespace dynrank {

DynamicRank::DynamicRank(Index n)
    : A_(zeros(n, n)),
      T_(identity(n)),
      E_(zeros(n, n)),
      pivot_of_col_(static_cast<std::size_t>(n), -1),
      col_of_row_(static_cast<std::size_t>(n), -1) {}

DynamicRank::DynamicRank(const Matrix& A) : DynamicRank(A.rows()) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "DynamicRank needs a square matrix");
  A_ = A;
  E_ = A;
  for (Index c = 0; c < A.cols(); ++c) settle(c);
}

void DynamicRank::check_column(Index i) const {
  if (i < 0 || i >= size()) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
}

// (E, T)_target += factor * (E, T)_source
void DynamicRank::eliminate_into(Index target, Index source, Fp factor) {
  const Index n = size();
  kernel::axpy(E_.col(target).data(), E_.col(source).data(), factor, n);
  kernel::axpy(T_.col(target).data(), T_.col(source).data(), factor, n);
}

void DynamicRank::settle(Index c) {
  const Index n = size();
  // E_c is zero on pivot rows after this loop; the other pivots are zero at
  // each other's pivot rows, so one pass suffices.
  for (Index p : pivots_) {
    const Fp f = E_(pivot_of_col_[static_cast<std::size_t>(p)], c);
    if (!f.is_zero()) eliminate_into(c, p, -f);
  }
  Index row = -1;
  const Fp* e = E_.col(c).data();
  for (Index r = 0; r < n; ++r) {
    if (!e[r].is_zero()) {
      row = r;
      break;
    }
  }
  if (row < 0) {
    // A null column: E_c is exactly zero.
    return;
  }
  const Fp s = gf::inv(E_(row, c));
  kernel::scale(E_.col(c).data(), s, n);
  kernel::scale(T_.col(c).data(), s, n);
  for (Index p : pivots_) {
    const Fp f = E_(row, p);
    if (!f.is_zero()) eliminate_into(p, c, -f);
  }
  pivot_of_col_[static_cast<std::size_t>(c)] = row;
  col_of_row_[static_cast<std::size_t>(row)] = c;
  pivots_.push_back(c);
  ++rank_;
}

Index DynamicRank::column_update(Index i, const SparseVector& v) {
  check_column(i);
  const Index n = size();
  SparseVector nz;
  nz.reserve(v.size());
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= n) throw Error(Errc::index_out_of_range, "row " + std::to_string(e.index));
    if (!e.value.is_zero()) nz.push_back(e);
  }
  if (nz.empty()) return rank_;
  for (const auto& e : nz) A_(e.index, i) += e.value;

  // E' = E + v t^T where t is row i of T.
  std::vector<Index> support;
  Index null_col = -1;
  for (Index k = 0; k < n; ++k) {
    if (T_(i, k).is_zero()) continue;
    support.push_back(k);
    if (null_col < 0 && pivot_of_col_[static_cast<std::size_t>(k)] < 0) null_col = k;
  }

  if (null_col >= 0) {
    // Route the whole update into one null column: clear row i of T
    // elsewhere (E is unchanged since E_z = 0), then E_z = t_z v.
    const Index z = null_col;
    const Fp tz = T_(i, z);
    const Fp neg_inv = -gf::inv(tz);
    for (Index k : support) {
      if (k == z) continue;
      kernel::axpy(T_.col(k).data(), T_.col(z).data(), T_(i, k) * neg_inv, n);
    }
    for (const auto& e : nz) E_(e.index, z) += tz * e.value;
    gf::count_mul(nz.size());
    settle(z);
    return rank_;
  }

  // Every column touched by row i is a pivot. Fold them into one pivot
  // column p, which then receives the whole update and is re-settled.
  const Index p = support.front();
  const Fp tp = T_(i, p);
  const Fp neg_inv = -gf::inv(tp);
  for (Index k : support) {
    if (k == p) continue;
    eliminate_into(k, p, T_(i, k) * neg_inv);
  }
  for (const auto& e : nz) E_(e.index, p) += tp * e.value;
  gf::count_mul(nz.size());
  const Index row = pivot_of_col_[static_cast<std::size_t>(p)];
  pivot_of_col_[static_cast<std::size_t>(p)] = -1;
  col_of_row_[static_cast<std::size_t>(row)] = -1;
  pivots_.erase(std::find(pivots_.begin(), pivots_.end(), p));
  --rank_;
  settle(p);
  return rank_;
}

Index DynamicRank::column_update(Index i, const Vector& v) {
  if (v.size() != size()) throw Error(Errc::dimension_mismatch, "update vector length");
  return column_update(i, to_sparse(v));
}

Index DynamicRank::entry_update(Index i, Index j, Fp value) {
  check_column(j);
  if (i < 0 || i >= size()) throw Error(Errc::index_out_of_range, "row " + std::to_string(i));
  return column_update(j, SparseVector{{i, value - A_(i, j)}});
}

Index DynamicRank::set_column(Index i, const Vector& v) {
  check_column(i);
  if (v.size() != size()) throw Error(Errc::dimension_mismatch, "column length");
  SparseVector delta;
  for (Index r = 0; r < size(); ++r) {
    const Fp d = v(r) - A_(r, i);
    if (!d.is_zero()) delta.push_back({r, d});
  }
  return column_update(i, delta);
}

bool DynamicRank::check_invariants() const {
  const Index n = size();
  if (Matrix(A_ * T_) != E_) return false;
  if (dynrank::rank(T_) != n) return false;
  Index count = 0;
  for (Index c = 0; c < n; ++c) {
    const Index row = pivot_of_col_[static_cast<std::size_t>(c)];
    if (row < 0) {
      for (Index r = 0; r < n; ++r)
        if (!E_(r, c).is_zero()) return false;
      continue;
    }
    ++count;
    if (col_of_row_[static_cast<std::size_t>(row)] != c) return false;
    for (Index c2 = 0; c2 < n; ++c2) {
      if (pivot_of_col_[static_cast<std::size_t>(c2)] < 0) continue;
      if (E_(row, c2) != (c2 == c ? gf::one() : gf::zero())) return false;
    }
  }
  return count == rank_ && static_cast<Index>(pivots_.size()) == rank_;
}

}  // namespace dynrank
