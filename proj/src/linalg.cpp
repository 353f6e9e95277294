#include "dynrank/linalg.hpp"

namespace dynrank {

Matrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = r == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
  Matrix out = zeros(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) {
      throw Error(Errc::dimension_mismatch, "ragged matrix literal");
    }
    Index j = 0;
    for (long long x : row) out(i, j++) = Fp(x);
    ++i;
  }
  return out;
}

Vector from_values(std::initializer_list<long long> values) {
  Vector out(static_cast<Index>(values.size()));
  Index i = 0;
  for (long long x : values) out(i++) = Fp(x);
  return out;
}

Matrix identity(Index n) {
  Matrix out = zeros(n, n);
  for (Index i = 0; i < n; ++i) out(i, i) = gf::one();
  return out;
}

Matrix random_matrix(Index rows, Index cols, gf::Rng& rng) {
  Matrix out(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) out(r, c) = gf::sample(rng);
  return out;
}

Matrix random_matrix_of_rank(Index rows, Index cols, Index rho, gf::Rng& rng) {
  if (rho == 0) return zeros(rows, cols);
  const Matrix U = random_matrix(rows, rho, rng);
  const Matrix V = random_matrix(rho, cols, rng);
  Matrix out = zeros(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index k = 0; k < rho; ++k) kernel::axpy(out.col(c).data(), U.col(k).data(), V(k, c), rows);
  return out;
}

SparseVector to_sparse(const Vector& v) {
  SparseVector out;
  for (Index i = 0; i < v.size(); ++i) {
    if (!v(i).is_zero()) out.push_back({i, v(i)});
  }
  return out;
}

Vector to_dense(const SparseVector& v, Index n) {
  Vector out = zero_vector(n);
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= n) throw Error(Errc::index_out_of_range, "sparse index");
    out(e.index) += e.value;
  }
  return out;
}

namespace detail {

Index eliminate(Matrix& work, Fp* det) {
  const Index rows = work.rows();
  const Index cols = work.cols();
  Index rank = 0;
  Fp d = gf::one();
  // For each row, find the first remaining column with a nonzero there and
  // clear that row from the columns to its right.
  for (Index r = 0; r < rows && rank < cols; ++r) {
    Index piv = -1;
    for (Index c = rank; c < cols; ++c) {
      if (!work(r, c).is_zero()) {
        piv = c;
        break;
      }
    }
    if (piv < 0) {
      d = gf::zero();
      continue;
    }
    if (piv != rank) {
      work.col(piv).swap(work.col(rank));
      d = -d;
    }
    const Fp pv = work(r, rank);
    d *= pv;
    const Fp neg_inv = -gf::inv(pv);
    const Index len = rows - r;
    for (Index c = rank + 1; c < cols; ++c) {
      const Fp f = work(r, c);
      if (!f.is_zero()) kernel::axpy(&work(r, c), &work(r, rank), f * neg_inv, len);
    }
    ++rank;
  }
  if (det) *det = rank == rows && rows == cols ? d : gf::zero();
  return rank;
}

}  // namespace detail

std::optional<Matrix> inverse(const Matrix& A) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "inverse");
  const Index n = A.rows();
  // Work on [A^T | I] by columns so that column operations realize row
  // operations on A; the result comes back transposed.
  Matrix left = A.transpose();
  Matrix right = identity(n);
  for (Index r = 0; r < n; ++r) {
    Index piv = -1;
    for (Index c = r; c < n; ++c) {
      if (!left(r, c).is_zero()) {
        piv = c;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    if (piv != r) {
      left.col(piv).swap(left.col(r));
      right.col(piv).swap(right.col(r));
    }
    const Fp s = gf::inv(left(r, r));
    kernel::scale(left.col(r).data(), s, n);
    kernel::scale(right.col(r).data(), s, n);
    for (Index c = 0; c < n; ++c) {
      if (c == r) continue;
      const Fp f = left(r, c);
      if (f.is_zero()) continue;
      kernel::axpy(left.col(c).data(), left.col(r).data(), -f, n);
      kernel::axpy(right.col(c).data(), right.col(r).data(), -f, n);
    }
  }
  // A^T * right = I  =>  right^T = A^{-1}
  return Matrix(right.transpose());
}

IndexSet greedy_column_basis(const Matrix& A) {
  const Index rows = A.rows();
  IndexSet basis;
  // Reduced copies of accepted columns with their pivot rows.
  std::vector<Vector> reduced;
  std::vector<Index> pivots;
  for (Index c = 0; c < A.cols(); ++c) {
    Vector w = A.col(c);
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const Fp f = w(pivots[k]);
      if (!f.is_zero()) kernel::axpy(w.data(), reduced[k].data(), -f, rows);
    }
    Index piv = -1;
    for (Index r = 0; r < rows; ++r) {
      if (!w(r).is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    kernel::scale(w.data(), gf::inv(w(piv)), rows);
    for (auto& prev : reduced) {
      const Fp f = prev(piv);
      if (!f.is_zero()) kernel::axpy(prev.data(), w.data(), -f, rows);
    }
    reduced.push_back(std::move(w));
    pivots.push_back(piv);
    basis.push_back(c);
  }
  return basis;
}

}  // namespace dynrank
