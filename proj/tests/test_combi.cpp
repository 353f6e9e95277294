#include <gtest/gtest.h>

#include <set>

#include "dynrank/combi.hpp"
#include "dynrank/oracle.hpp"

using namespace dynrank;
using gf::Rng;

namespace {

using EdgeSet = std::set<std::pair<Index, Index>>;

bool is_matching_in(const MatchingEdges& M, const EdgeSet& edges) {
  std::set<Index> used;
  for (const auto& e : M) {
    if (!edges.count(e) || !used.insert(e.first).second || !used.insert(e.second).second) return false;
  }
  return true;
}

}  // namespace

TEST(HybridGraph, RoundTrip) {
  HybridGraph g(4);
  g.insert(0, 2);
  EXPECT_TRUE(g.test(0, 2));
  EXPECT_TRUE(g.test(2, 0));
  EXPECT_THROW(g.insert(2, 0), Error);
  g.erase(2, 0);
  EXPECT_FALSE(g.test(0, 2));
  EXPECT_THROW(g.erase(0, 2), Error);
  EXPECT_THROW(g.insert(1, 1), Error);
  EXPECT_TRUE(g.check_consistency());
}

TEST(HybridGraph, RandomOpsMatchSet) {
  Rng rng(1);
  const Index n = 30;
  HybridGraph g(n);
  EdgeSet oracle;
  for (int t = 0; t < 10000; ++t) {
    const auto u = static_cast<Index>(rng.uniform(n));
    auto v = static_cast<Index>(rng.uniform(n - 1));
    if (v >= u) ++v;
    const auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (oracle.count(key)) {
      g.erase(u, v);
      oracle.erase(key);
    } else {
      g.insert(u, v);
      oracle.insert(key);
    }
    const auto a = static_cast<Index>(rng.uniform(n)), b = static_cast<Index>(rng.uniform(n));
    ASSERT_EQ(g.test(a, b), oracle.count({std::min(a, b), std::max(a, b)}) != 0);
  }
  EXPECT_TRUE(g.check_consistency());
  for (Index u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    std::sort(nb.begin(), nb.end());
    std::vector<Index> want;
    for (Index v = 0; v < n; ++v)
      if (oracle.count({std::min(u, v), std::max(u, v)})) want.push_back(v);
    EXPECT_EQ(nb, want);
  }
}

TEST(HybridGraph, SubgraphAndExternalNeighbors) {
  HybridGraph g(3);
  EXPECT_TRUE(g.subgraph({}).empty());
  g.insert(0, 1);
  EXPECT_EQ(g.subgraph({0, 1, 2}), (std::vector<std::vector<char>>{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(g.external_neighbors({0}), (std::vector<std::optional<Index>>{1}));
  EXPECT_EQ(g.external_neighbors({0, 1}), (std::vector<std::optional<Index>>{std::nullopt, std::nullopt}));

  Rng rng(2);
  const Index n = 25;
  HybridGraph r(n);
  EdgeSet edges;
  for (int t = 0; t < 120; ++t) {
    const auto u = static_cast<Index>(rng.uniform(n));
    auto v = static_cast<Index>(rng.uniform(n - 1));
    if (v >= u) ++v;
    if (edges.insert({std::min(u, v), std::max(u, v)}).second) r.insert(u, v);
  }
  for (int t = 0; t < 50; ++t) {
    IndexSet S;
    for (Index v = 0; v < n; ++v)
      if (rng.uniform(3) == 0) S.push_back(v);
    const std::set<Index> inS(S.begin(), S.end());
    const auto sub = r.subgraph(S);
    const auto x = r.external_neighbors(S);
    for (std::size_t a = 0; a < S.size(); ++a) {
      for (std::size_t b = 0; b < S.size(); ++b) ASSERT_EQ(sub[a][b] != 0, r.test(S[a], S[b]));
      bool outside = false;
      for (Index w : r.neighbors(S[a])) outside |= !inS.count(w);
      if (x[a]) {
        EXPECT_TRUE(r.test(S[a], *x[a]));
        EXPECT_FALSE(inS.count(*x[a]));
      } else {
        EXPECT_FALSE(outside);
      }
    }
  }
}

TEST(CombiMatcher, Examples) {
  // a, c on the left (0, 1); b, d on the right (2, 3).
  CombiMatcher m(2, 2);
  EXPECT_EQ(m.insert(0, 2), (MatchingEdges{{0, 2}}));
  m.insert(1, 3);
  EXPECT_EQ(m.insert(1, 2), (MatchingEdges{{0, 2}, {1, 3}}));
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m.erase(3, 1), (MatchingEdges{{0, 2}}));
  EXPECT_THROW(m.insert(0, 1), Error);
  EXPECT_THROW(m.erase(0, 3), Error);
  EXPECT_THROW(m.insert(2, 0), Error);
}

TEST(CombiMatcher, AugmentsThroughMatchedVertices) {
  CombiMatcher m(3, 3);
  m.insert(0, 3);
  m.insert(1, 3);  // left 1 free, right 3 taken
  EXPECT_EQ(m.size(), 1);
  EXPECT_EQ(m.insert(0, 4), (MatchingEdges{{0, 4}, {1, 3}}));
  EXPECT_TRUE(m.last_augmented());
}

TEST(CombiMatcher, ReplayMatchesOracle) {
  Rng rng(3);
  const Index L = 12, R = 10;
  CombiMatcher m(L, R);
  EdgeSet edges;
  for (int t = 0; t < 2000; ++t) {
    const auto u = static_cast<Index>(rng.uniform(L));
    const auto v = L + static_cast<Index>(rng.uniform(R));
    Index pre = m.size();
    if (edges.count({u, v})) {
      pre -= m.mate(u) == v;
      edges.erase({u, v});
      m.erase(u, v);
    } else {
      edges.insert({u, v});
      m.insert(u, v);
    }
    const Index want = oracle::matching_size(L + R, {edges.begin(), edges.end()});
    ASSERT_EQ(m.size(), want) << "step " << t;
    ASSERT_TRUE(is_matching_in(m.matching(), edges));
    // The G[W] search finds a path exactly when M was short before it.
    if (m.last_searched()) ASSERT_EQ(m.last_augmented(), want > pre);
  }
  EXPECT_TRUE(m.graph().check_consistency());
}

TEST(CombiMatcher, Deterministic) {
  auto run = [] {
    Rng rng(4);
    CombiMatcher m(20, 20);
    EdgeSet edges;
    std::vector<MatchingEdges> out;
    for (int t = 0; t < 500; ++t) {
      const auto u = static_cast<Index>(rng.uniform(20));
      const auto v = 20 + static_cast<Index>(rng.uniform(20));
      if (edges.count({u, v})) {
        edges.erase({u, v});
        out.push_back(m.erase(u, v));
      } else {
        edges.insert({u, v});
        out.push_back(m.insert(u, v));
      }
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(CombiMatcher, StepsIndependentOfN) {
  std::vector<double> mean;
  for (Index n : {100, 400}) {
    const Index half = n / 2;
    CombiMatcher m(half, half);
    Rng rng(5);
    // Left vertices 0..2 carry every edge, so |M| <= 3 while their degrees
    // grow with n.
    EdgeSet edges;
    for (Index u = 0; u < 3; ++u)
      for (Index v = 0; v < half; ++v)
        if (rng.uniform(2) == 0) {
          m.insert(u, half + v);
          edges.insert({u, half + v});
        }
    std::uint64_t steps = 0;
    const int updates = 2000;
    for (int t = 0; t < updates; ++t) {
      const auto u = static_cast<Index>(rng.uniform(3));
      // Touch the matched endpoints often so the augmenting search runs.
      const auto mate = m.mate(u);
      const Index v = (mate && rng.uniform(2) == 0) ? *mate : half + static_cast<Index>(rng.uniform(half));
      if (edges.count({u, v})) {
        edges.erase({u, v});
        m.erase(u, v);
      } else {
        edges.insert({u, v});
        m.insert(u, v);
      }
      ASSERT_LE(m.size(), 3);
      steps += m.last_steps();
    }
    mean.push_back(static_cast<double>(steps) / updates);
  }
  EXPECT_LT(mean[1], 1.5 * mean[0]);
}
