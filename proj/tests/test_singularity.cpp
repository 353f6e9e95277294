#include <gtest/gtest.h>

#include "dynrank/singularity.hpp"

using namespace dynrank;
using gf::PrimeScope;
using gf::Rng;

TEST(Singularity, InitExamples) {
  SingularityDetector id(identity(5));
  EXPECT_EQ(id.inverse(), identity(5));

  PrimeScope scope(7);
  SingularityDetector d(from_rows({{2, 0}, {0, 3}}));
  EXPECT_EQ(d.inverse(), from_rows({{4, 0}, {0, 5}}));
}

TEST(Singularity, InitRandomAndErrors) {
  Rng rng(1);
  Matrix H = random_matrix(8, 8, rng);
  while (determinant(H).is_zero()) H = random_matrix(8, 8, rng);
  SingularityDetector d(H);
  EXPECT_EQ(Matrix(H * d.inverse()), identity(8));

  try {
    SingularityDetector bad(from_rows({{1, 1}, {1, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_init);
  }
  EXPECT_THROW(SingularityDetector(zeros(2, 3)), Error);
}

TEST(Singularity, EntryExamples) {
  SingularityDetector d(identity(2));
  EXPECT_EQ(d.try_entry_update(0, 0, -gf::one()), UpdateOutcome::would_be_singular);
  EXPECT_EQ(d.matrix(), identity(2));
  EXPECT_EQ(d.try_entry_update(1, 0, gf::zero()), UpdateOutcome::applied);
  EXPECT_EQ(d.matrix(), identity(2));
  try {
    d.try_entry_update(2, 0, gf::one());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::index_out_of_range);
  }
}

TEST(Singularity, RevertExamples) {
  SingularityDetector fresh(identity(3));
  try {
    fresh.revert();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_log);
  }

  Rng rng(2);
  SingularityDetector d(identity(4));
  const Matrix before = d.matrix();
  ASSERT_EQ(d.try_entry_update(1, 2, Fp(5)), UpdateOutcome::applied);
  d.revert();
  EXPECT_EQ(d.matrix(), before);
  EXPECT_EQ(d.inverse(), identity(4));
}

TEST(Singularity, WalkMatchesDeterminantOracle) {
  for (std::uint64_t p : {5ull, 7ull, 2147483647ull}) {
    PrimeScope scope(p);
    Rng rng(p);
    const Index n = 6;
    Matrix H = identity(n);
    SingularityDetector d(H);
    int rejected = 0;
    for (int t = 0; t < 400; ++t) {
      const auto i = static_cast<Index>(rng.uniform(n));
      const auto j = static_cast<Index>(rng.uniform(n));
      // Half the proposals are aimed at singularity: delta = -1 / Hinv(j, i).
      Fp delta = gf::sample(rng);
      if (rng.uniform(2) == 0 && !d.inverse()(j, i).is_zero()) delta = -gf::inv(d.inverse()(j, i));
      Matrix next = H;
      next(i, j) += delta;
      const bool singular = determinant(next).is_zero();
      const auto out = d.try_entry_update(i, j, delta);
      ASSERT_EQ(out == UpdateOutcome::would_be_singular, singular) << "p " << p << " step " << t;
      if (!singular) H = next;
      rejected += singular;
      ASSERT_EQ(d.matrix(), H);
    }
    EXPECT_EQ(Matrix(H * d.inverse()), identity(n));
    EXPECT_GT(rejected, 0);
  }
}

TEST(Singularity, InterleavedRevertMatchesReplay) {
  Rng rng(3);
  const Index n = 7;
  Matrix H = random_matrix(n, n, rng);
  while (determinant(H).is_zero()) H = random_matrix(n, n, rng);
  SingularityDetector d(H);
  std::vector<Matrix> history{H};
  for (int t = 0; t < 50; ++t) {
    if (history.size() > 1 && rng.uniform(3) == 0) {
      d.revert();
      history.pop_back();
    } else {
      const auto i = static_cast<Index>(rng.uniform(n));
      const auto j = static_cast<Index>(rng.uniform(n));
      const Fp delta = gf::sample_nonzero(rng);
      if (d.try_entry_update(i, j, delta) == UpdateOutcome::applied) {
        Matrix next = history.back();
        next(i, j) += delta;
        history.push_back(next);
      }
    }
    ASSERT_EQ(d.matrix(), history.back());
  }
  EXPECT_EQ(*inverse(d.matrix()), d.inverse());
}

TEST(Singularity, RankOneMatchesOracle) {
  Rng rng(4);
  const Index n = 9;
  SingularityDetector d(identity(n));
  Matrix H = identity(n);
  for (int t = 0; t < 100; ++t) {
    SparseVector c, e;
    for (int k = 0; k < 2; ++k) c.push_back({static_cast<Index>(rng.uniform(n)), gf::sample(rng)});
    e.push_back({static_cast<Index>(rng.uniform(n)), gf::sample(rng)});
    Matrix next = H + to_dense(c, n) * to_dense(e, n).transpose();
    const bool singular = determinant(next).is_zero();
    EXPECT_EQ(d.would_be_singular(c, e), singular);
    EXPECT_EQ(d.try_rank_one(c, e) == UpdateOutcome::would_be_singular, singular);
    if (!singular) H = next;
    ASSERT_EQ(d.matrix(), H);
  }
}

TEST(Singularity, QuadraticMultiplications) {
  Rng rng(5);
  const Index n = 64;
  SingularityDetector d(identity(n));
  for (int t = 0; t < 20; ++t) {
    const auto before = gf::counters().mul;
    d.try_entry_update(static_cast<Index>(rng.uniform(n)), static_cast<Index>(rng.uniform(n)), gf::sample_nonzero(rng));
    EXPECT_LE(gf::counters().mul - before, static_cast<std::uint64_t>(3 * n * n));
  }
}
