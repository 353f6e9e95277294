#include <gtest/gtest.h>

#include "dynrank/linalg.hpp"

using namespace dynrank;
using gf::PrimeScope;
using gf::Rng;

TEST(Rank, Examples) {
  EXPECT_EQ(rank(identity(3)), 3);
  EXPECT_EQ(rank(zeros(3, 3)), 0);
  PrimeScope scope(7);
  EXPECT_EQ(rank(from_rows({{1, 2}, {2, 4}})), 1);
  EXPECT_EQ(rank(from_rows({{1, 2, 3}})), 1);
  EXPECT_EQ(rank(Matrix(0, 4)), 0);
}

TEST(Rank, TransposeInvariant) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Index r = 1 + static_cast<Index>(rng.uniform(9));
    const Index c = 1 + static_cast<Index>(rng.uniform(9));
    const Index rho = static_cast<Index>(rng.uniform(std::min(r, c) + 1));
    const Matrix A = random_matrix_of_rank(r, c, rho, rng);
    EXPECT_EQ(rank(A), rank(A.transpose()));
    EXPECT_EQ(rank(A), rho);  // fails only with probability ~ n/p
  }
}

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(identity(4)), gf::one());
  PrimeScope scope(7);
  EXPECT_EQ(determinant(from_rows({{2, 0}, {0, 3}})).value(), 6u);
  EXPECT_EQ(determinant(from_rows({{1, 2}, {3, 4}})).value(), 5u);
  EXPECT_EQ(determinant(Matrix(0, 0)), gf::one());
}

TEST(Determinant, NotSquare) {
  try {
    (void)determinant(zeros(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_square);
  }
}

TEST(Determinant, AgreesWithLeibniz) {
  for (std::uint64_t p : {5ull, 7ull, 2147483647ull}) {
    PrimeScope scope(p);
    Rng rng(p + 3);
    for (Index n : {1, 2, 3, 4}) {
      for (int t = 0; t < 200; ++t) {
        const Matrix A = random_matrix(n, n, rng);
        const Fp d = determinant(A);
        EXPECT_EQ(d, permutation_determinant(A));
        EXPECT_EQ(!d.is_zero(), rank(A) == n);
      }
    }
  }
}

TEST(Submatrix, Examples) {
  const Matrix A = from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  EXPECT_EQ(deleted(A, {1}, {2}), from_rows({{1, 2}, {7, 8}}));
  EXPECT_EQ(deleted(identity(3), {0}, {0}), identity(2));
  EXPECT_EQ(submatrix(A, {0, 1, 2}, {0, 1, 2}), A);
  EXPECT_EQ(submatrix(A, {2, 0}, {1}), from_rows({{8}, {2}}));
  EXPECT_THROW((void)deleted(A, {3}, {}), Error);
  EXPECT_THROW((void)submatrix(A, {0}, {-1}), Error);
}

TEST(InSpan, Examples) {
  EXPECT_TRUE(in_span(identity(2), from_values({3, 4})));
  EXPECT_FALSE(in_span(from_rows({{1}, {0}}), from_values({0, 1})));
  PrimeScope scope(7);
  EXPECT_TRUE(in_span(from_rows({{1}, {2}}), from_values({3, 6})));
  EXPECT_THROW((void)in_span(identity(2), from_values({1, 2, 3})), Error);
}

TEST(Inverse, MatchesIdentityProduct) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform(10));
    const Matrix A = random_matrix(n, n, rng);
    const auto inv = inverse(A);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(Matrix(A * *inv), identity(n));
  }
  EXPECT_FALSE(inverse(from_rows({{1, 2}, {2, 4}})).has_value());
}

TEST(GreedyBasis, LeftmostIndependentColumns) {
  const Matrix A = from_rows({{0, 1, 2, 0, 1}, {0, 0, 0, 1, 1}, {0, 0, 0, 0, 0}});
  EXPECT_EQ(greedy_column_basis(A), (IndexSet{1, 3}));
  EXPECT_EQ(greedy_row_basis(A), (IndexSet{0, 1}));
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Matrix B = random_matrix_of_rank(8, 8, 1 + t % 8, rng);
    const IndexSet rows = greedy_row_basis(B), cols = greedy_column_basis(B);
    ASSERT_EQ(static_cast<Index>(rows.size()), rank(B));
    EXPECT_FALSE(determinant(submatrix(B, rows, cols)).is_zero());
  }
}

TEST(Kernel, AxpyMatchesScalarLoop) {
  Rng rng(77);
  for (std::uint64_t p : {5ull, 101ull, 2147483647ull}) {
    PrimeScope scope(p);
    Vector x(37), y(37);
    for (Index i = 0; i < 37; ++i) {
      x(i) = gf::sample(rng);
      y(i) = gf::sample(rng);
    }
    const Fp c = gf::sample(rng);
    Vector expect = y;
    for (Index i = 0; i < 37; ++i) expect(i) += c * x(i);
    kernel::axpy(y.data(), x.data(), c, 37);
    EXPECT_EQ(y, expect);
  }
}
