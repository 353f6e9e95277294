#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "dynrank/gadget.hpp"
#include "gadget_support.hpp"

using namespace dynrank;
using gf::PrimeScope;
using gf::Rng;
using namespace dynrank::testing;


TEST(GadgetTree, SmallTrees) {
  GadgetTree one(1);
  EXPECT_EQ(one.labeled_count(), 1);
  EXPECT_EQ(one.unlabeled_count(), 0);
  EXPECT_EQ(one.interval(1), std::make_pair(Index{0}, Index{0}));
  const Matrix b1 = tree_biadjacency(one);
  EXPECT_EQ(b1.rows(), 0);
  EXPECT_EQ(b1.cols(), 1);

  GadgetTree four(4);
  EXPECT_EQ(tree_biadjacency(four, TreeOrder::breadth_first),
            from_rows({{1, 1, 1, 0, 0, 0, 0}, {0, 1, 0, 1, 1, 0, 0}, {0, 0, 1, 0, 0, 1, 1}}));
  // Leaves first: columns {1}..{4}, then {1..4}, {1,2}, {3,4}.
  EXPECT_EQ(tree_biadjacency(four),
            from_rows({{0, 0, 0, 0, 1, 1, 1}, {1, 1, 0, 0, 0, 1, 0}, {0, 0, 1, 1, 0, 0, 1}}));

  GadgetTree eight(8);
  EXPECT_EQ(eight.labeled_count(), 15);
  EXPECT_EQ(eight.unlabeled_count(), 7);
  const Matrix b8 = tree_biadjacency(eight);
  EXPECT_EQ(b8.rows(), 7);
  EXPECT_EQ(b8.cols(), 15);
  for (Index r = 0; r < 7; ++r) {
    Index deg = 0;
    for (Index c = 0; c < 15; ++c) deg += !b8(r, c).is_zero();
    EXPECT_EQ(deg, 3);
  }
  EXPECT_THROW(GadgetTree(6), Error);
}

TEST(GadgetTree, Labels) {
  GadgetTree t(8);
  for (Label h = 1; h < 16; ++h) {
    const auto [l, r] = t.interval(h);
    EXPECT_EQ(t.label(l, r), h);
    if (!t.is_leaf(h)) {
      const Index m = (l + r) / 2;
      EXPECT_EQ(t.interval(2 * h), std::make_pair(l, m));
      EXPECT_EQ(t.interval(2 * h + 1), std::make_pair(m + 1, r));
    }
  }
  try {
    t.label(1, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_label);
  }
  EXPECT_THROW(t.label(0, 5), Error);
  EXPECT_THROW(t.interval(16), Error);
}

TEST(Gadget, EmptyAssignmentStructure) {
  Gadget g(4);
  const Matrix& B = g.matrix();
  ASSERT_EQ(B.rows(), 14);
  Index nnz = 0;
  for (Index r = 0; r < 14; ++r)
    for (Index c = 0; c < 14; ++c) nnz += !B(r, c).is_zero();
  EXPECT_EQ(nnz, 4 + 2 * 9);
  const Matrix tb = tree_biadjacency(g.tree());
  EXPECT_EQ(Matrix(B.block(0, 7, 7, 3)), Matrix(tb.transpose()));
  EXPECT_EQ(Matrix(B.block(7, 0, 3, 7)), tb);
  EXPECT_EQ(Matrix(B.block(10, 10, 4, 4)), identity(4));
  EXPECT_TRUE(g.is_forest());
}

TEST(Gadget, LeafAssignmentHasOnlyTheEmptyMinor) {
  GadgetTree t(4);
  std::vector<Label> leaves{t.leaf(0), t.leaf(1), t.leaf(2), t.leaf(3)};
  const Gadget g = Gadget::build(4, leaves, leaves);
  const auto got = nonzero_minors(g.matrix(), 4);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(*got.begin(), std::make_pair(0u, 0u));
}

TEST(Gadget, MinorCharacterizationExample) {
  GadgetTree t(4);
  const Gadget g = Gadget::build(4, {t.leaf(0), t.label(0, 3)}, {t.leaf(1), t.label(2, 3)});
  EXPECT_EQ(nonzero_minors(g.matrix(), 4), predicted_minors(4, {0}, {0, 3}, {1}, {2, 3}));
  EXPECT_EQ(nonzero_minors(g.matrix(), 4).size(), 3u * 2u);
}

TEST(Gadget, MinorCharacterizationExhaustive) {
  Rng rng(11);
  for (Index n : {2, 4, 8}) {
    GadgetTree t(n);
    const int trials = n == 8 ? 6 : 40;
    for (int trial = 0; trial < trials; ++trial) {
      const auto k = 1 + static_cast<Index>(rng.uniform(static_cast<std::uint64_t>(n)));
      std::vector<Index> is, js;
      std::vector<Label> a, b;
      for (Index s = 0; s + 1 < k; ++s) {
        is.push_back(static_cast<Index>(rng.uniform(n)));
        js.push_back(static_cast<Index>(rng.uniform(n)));
        a.push_back(t.leaf(is.back()));
        b.push_back(t.leaf(js.back()));
      }
      const Label I = 1 + static_cast<Label>(rng.uniform(2 * n - 1));
      const Label J = 1 + static_cast<Label>(rng.uniform(2 * n - 1));
      a.push_back(I);
      b.push_back(J);
      const Gadget g = Gadget::build(n, a, b);
      ASSERT_TRUE(g.is_forest());
      ASSERT_EQ(nonzero_minors(g.matrix(), n), predicted_minors(n, is, t.interval(I), js, t.interval(J)))
          << "n " << n << " trial " << trial;
    }
  }
}

TEST(Gadget, BadLabel) {
  try {
    Gadget::build(4, {8}, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_label);
  }
  Gadget g(4);
  EXPECT_THROW(g.plan_relink(GadgetSide::a, 0, 0), Error);
}

TEST(Gadget, RelinkMatchesRebuild) {
  Rng rng(12);
  const Index n = 8;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Label> a, b;
    Gadget g(n);
    const auto k = static_cast<Index>(rng.uniform(n + 1));
    for (Index s = 0; s < k; ++s) {
      a.push_back(1 + static_cast<Label>(rng.uniform(2 * n - 1)));
      b.push_back(1 + static_cast<Label>(rng.uniform(2 * n - 1)));
      EXPECT_EQ(g.relink(GadgetSide::a, s, a.back()).size(), 2u);
      // v_s was left isolated by the first relink.
      EXPECT_EQ(g.relink(GadgetSide::b, s, b.back()).size(), 1u);
      ASSERT_EQ(g.matrix(), Gadget::build(n, a, b).matrix());
    }
    for (Index s = 0; s < k; ++s) {
      EXPECT_TRUE(g.plan_relink(GadgetSide::a, s, a[static_cast<std::size_t>(s)]).empty());
      const Label to = 1 + static_cast<Label>(rng.uniform(2 * n - 1));
      const auto d = g.relink(GadgetSide::b, s, to);
      EXPECT_EQ(d.size(), to == b[static_cast<std::size_t>(s)] ? 0u : 2u);
      b[static_cast<std::size_t>(s)] = to;
      ASSERT_EQ(g.matrix(), Gadget::build(n, a, b).matrix());
      ASSERT_TRUE(g.is_forest());
    }
    EXPECT_EQ(g.switch_labels(GadgetSide::b, 0).size(), k > 0 ? 1u : 0u);
  }
}

TEST(Gadget, RankOneForm) {
  Gadget g(4);
  const auto d = g.plan_relink(GadgetSide::a, 1, 3);
  const RankOne r = as_rank_one(d, 4);
  Matrix B = g.matrix();
  B += to_dense(r.c, 18).tail(14) * to_dense(r.d, 18).tail(14).transpose();
  g.apply(d);
  EXPECT_EQ(B, g.matrix());
  EXPECT_THROW(as_rank_one({{0, 0, gf::one()}, {1, 1, gf::one()}}), Error);
}

TEST(BlockMatrixH, SingleIndex) {
  PrimeScope scope(101);
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const Matrix A = random_matrix(1, 1, rng);
    const Matrix B = random_matrix(2, 2, rng);
    const auto h = assemble_H(A, B, rng);
    const Fp expect = A(0, 0) * determinant(B) - h.x(0) * h.y(0) * B(1, 1);
    EXPECT_EQ(determinant(h.H), expect);
  }
}

TEST(BlockMatrixH, BlockExpansionExhaustive) {
  PrimeScope scope(101);
  Rng rng(14);
  for (Index n = 1; n <= 3; ++n) {
    for (int t = 0; t < 30; ++t) {
      const Matrix A = random_matrix_of_rank(n, n, static_cast<Index>(rng.uniform(n + 1)), rng);
      const Matrix B = random_matrix(4 * n - 2, 4 * n - 2, rng);
      const auto h = assemble_H(A, B, rng);
      Fp sum = gf::zero();
      for (unsigned s = 0; s < (1u << n); ++s)
        for (unsigned tt = 0; tt < (1u << n); ++tt) {
          if (std::popcount(s) != std::popcount(tt)) continue;
          const IndexSet S = members(s, n), T = members(tt, n);
          Fp term = determinant(deleted(A, S, T)) * determinant(deleted(B, T, S));
          for (Index i : S) term *= h.x(i);
          for (Index i : T) term *= h.y(i);
          sum += S.size() % 2 ? -term : term;
        }
      ASSERT_EQ(determinant(h.H), sum) << "n " << n;
    }
  }
}

TEST(BlockMatrixH, NonsingularIffSomeMinorPair) {
  Rng rng(15);
  int nonsingular = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform(3));
    const Index N = Index{1} << (n == 3 ? 2 : n - 1);
    GadgetTree tree(N);
    std::vector<Label> a, b;
    const auto k = static_cast<Index>(rng.uniform(n + 1));
    for (Index s = 0; s < k; ++s) {
      a.push_back(1 + static_cast<Label>(rng.uniform(2 * N - 1)));
      b.push_back(1 + static_cast<Label>(rng.uniform(2 * N - 1)));
    }
    Matrix A = zeros(N, N);
    A.topLeftCorner(n, n) = random_matrix_of_rank(n, n, static_cast<Index>(rng.uniform(n + 1)), rng);
    const Gadget g = Gadget::build(N, a, b);
    const auto h = assemble_H(A, g.matrix(), rng);
    bool exists = false;
    for (unsigned s = 0; s < (1u << N) && !exists; ++s)
      for (unsigned tt = 0; tt < (1u << N) && !exists; ++tt) {
        if (std::popcount(s) != std::popcount(tt)) continue;
        const IndexSet S = members(s, N), T = members(tt, N);
        exists = !determinant(deleted(A, S, T)).is_zero() && !determinant(deleted(g.matrix(), T, S)).is_zero();
      }
    EXPECT_EQ(!determinant(h.H).is_zero(), exists) << "trial " << t;
    nonsingular += exists;
  }
  EXPECT_GT(nonsingular, 10);
  EXPECT_LT(nonsingular, 90);
}

TEST(BlockMatrixH, DimensionMismatch) {
  Rng rng(16);
  try {
    assemble_H(identity(2), identity(5), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}
