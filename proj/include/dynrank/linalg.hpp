#pragma once

// Dense matrices over GF(p) and the elimination-based oracles.
//
// Matrices are plain Eigen objects with scalar gf::Fp (column-major), so the
// usual Eigen block/expression API applies. Indices are 0-based here; the
// stream format and CLI translate from 1-based.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dynrank/error.hpp"
#include "dynrank/gf.hpp"

namespace dynrank {

using gf::Fp;
using Index = Eigen::Index;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<Fp>;
using Vector = DenseVector<Fp>;
using IndexSet = std::vector<Index>;

struct SparseEntry {
  Index index;
  Fp value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Unordered list of (index, value); indices are distinct, values may be zero.
using SparseVector = std::vector<SparseEntry>;

namespace kernel {

// Shoup's precomputed quotient for multiplying many residues by one constant.
struct Multiplier {
  std::uint32_t c;
  std::uint32_t c_shoup;  // floor(c * 2^32 / p)

  explicit Multiplier(Fp x) noexcept
      : c(x.value()),
        c_shoup(static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.value()) << 32) /
                                           gf::prime())) {}

  std::uint32_t apply(std::uint32_t x, std::uint32_t p) const noexcept {
    const auto q = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * c_shoup) >> 32);
    std::uint32_t r = x * c - q * p;  // exact value lies in [0, 2p)
    return r >= p ? r - p : r;
  }
};

/// y[0..n) += c * x[0..n)
inline void axpy(Fp* y, const Fp* x, Fp c, Index n) noexcept {
  if (c.is_zero()) return;
  gf::count_mul(static_cast<std::uint64_t>(n));
  const Multiplier m(c);
  const std::uint32_t p = gf::prime();
  auto* yr = reinterpret_cast<std::uint32_t*>(y);
  const auto* xr = reinterpret_cast<const std::uint32_t*>(x);
  for (Index k = 0; k < n; ++k) {
    std::uint32_t s = yr[k] + m.apply(xr[k], p);
    yr[k] = s >= p ? s - p : s;
  }
}

/// x[0..n) *= c
inline void scale(Fp* x, Fp c, Index n) noexcept {
  gf::count_mul(static_cast<std::uint64_t>(n));
  const Multiplier m(c);
  const std::uint32_t p = gf::prime();
  auto* xr = reinterpret_cast<std::uint32_t*>(x);
  for (Index k = 0; k < n; ++k) xr[k] = m.apply(xr[k], p);
}

static_assert(sizeof(Fp) == sizeof(std::uint32_t));

}  // namespace kernel

/// Builds a matrix from integer literals (reduced mod the current prime).
Matrix from_rows(std::initializer_list<std::initializer_list<long long>> rows);
Vector from_values(std::initializer_list<long long> values);

inline Matrix zeros(Index rows, Index cols) { return Matrix::Constant(rows, cols, gf::zero()); }
inline Vector zero_vector(Index n) { return Vector::Constant(n, gf::zero()); }
Matrix identity(Index n);

Matrix random_matrix(Index rows, Index cols, gf::Rng& rng);
/// Product of random rows x rho and rho x cols factors; rank rho w.h.p.
Matrix random_matrix_of_rank(Index rows, Index cols, Index rho, gf::Rng& rng);

SparseVector to_sparse(const Vector& v);
Vector to_dense(const SparseVector& v, Index n);

namespace detail {

// Column elimination on a working copy. Returns the rank; if det is non-null
// and the matrix is square, writes the determinant.
Index eliminate(Matrix& work, Fp* det);

inline void check_indices(const IndexSet& idx, Index bound, const char* what) {
  for (Index i : idx) {
    if (i < 0 || i >= bound) {
      throw Error(Errc::index_out_of_range,
                  std::string(what) + " index " + std::to_string(i) + " out of range");
    }
  }
}

inline IndexSet complement(const IndexSet& drop, Index n) {
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  for (Index i : drop) gone[static_cast<std::size_t>(i)] = 1;
  IndexSet keep;
  for (Index i = 0; i < n; ++i) {
    if (!gone[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  return keep;
}

}  // namespace detail

/// Rank over GF(p) by Gaussian elimination; pivots are taken as the first
/// nonzero in order, so the run is deterministic.
template <class Derived>
Index rank(const Eigen::MatrixBase<Derived>& A) {
  // eliminate() works on columns; rank(A) = rank(A^T) lets us pick the
  // orientation with contiguous long columns.
  Matrix work = A.rows() >= A.cols() ? Matrix(A) : Matrix(A.transpose());
  return detail::eliminate(work, nullptr);
}

template <class Derived>
Fp determinant(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != A.cols()) {
    throw Error(Errc::not_square, "determinant of a " + std::to_string(A.rows()) + "x" +
                                      std::to_string(A.cols()) + " matrix");
  }
  if (A.rows() == 0) return gf::one();
  Matrix work = A;
  Fp det;
  detail::eliminate(work, &det);
  return det;
}

/// Leibniz formula; independent of elimination. Meant for n <= 8.
template <class Derived>
Fp permutation_determinant(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "permutation determinant");
  const Index n = A.rows();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Fp total = gf::zero();
  do {
    Fp term = gf::one();
    for (Index r = 0; r < n; ++r) term *= A(r, perm[static_cast<std::size_t>(r)]);
    if (term.is_zero()) continue;
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
      for (std::size_t b = a + 1; b < perm.size(); ++b) inversions += perm[a] > perm[b];
    total += (inversions % 2 == 0) ? term : -term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// True iff v is a linear combination of the columns of B.
template <class DerivedB, class DerivedV>
bool in_span(const Eigen::MatrixBase<DerivedB>& B, const Eigen::MatrixBase<DerivedV>& v) {
  if (v.cols() != 1 || v.rows() != B.rows()) {
    throw Error(Errc::dimension_mismatch, "in_span: vector length must equal row count");
  }
  Matrix aug(B.rows(), B.cols() + 1);
  aug.leftCols(B.cols()) = B;
  aug.col(B.cols()) = v;
  return rank(aug) == rank(B);
}

/// A_{I,J}, rows and columns in the given order.
template <class Derived>
Matrix submatrix(const Eigen::MatrixBase<Derived>& A, const IndexSet& rows, const IndexSet& cols) {
  detail::check_indices(rows, A.rows(), "row");
  detail::check_indices(cols, A.cols(), "column");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      out(static_cast<Index>(r), static_cast<Index>(c)) = A(rows[r], cols[c]);
  return out;
}

/// A_{-S,-T}: A with the rows S and columns T removed.
template <class Derived>
Matrix deleted(const Eigen::MatrixBase<Derived>& A, const IndexSet& S, const IndexSet& T) {
  detail::check_indices(S, A.rows(), "row");
  detail::check_indices(T, A.cols(), "column");
  return submatrix(A, detail::complement(S, A.rows()), detail::complement(T, A.cols()));
}

/// Inverse by Gauss-Jordan; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& A);

/// Greedy maximal independent column set, leftmost first.
IndexSet greedy_column_basis(const Matrix& A);
inline IndexSet greedy_row_basis(const Matrix& A) { return greedy_column_basis(A.transpose()); }

}  // namespace dynrank
