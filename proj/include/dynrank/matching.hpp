#pragma once

// Matching size, weight and vertex set from ranks of random matrices.
//
// Vertices are 0-based. Every inserted edge draws a fresh nonzero value, also
// when an edge is re-inserted after a delete.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dynrank/rank_reduction.hpp"
#include "dynrank/submatrix.hpp"

namespace dynrank {

/// Tutte matrix A(u, v) = x = -A(v, u) watched by an UnboundedRank.
class GeneralMatching {
 public:
  GeneralMatching(Index n, gf::Rng& rng, UnboundedRankOptions opts = {});

  Index n() const { return n_; }
  /// Inserts or deletes {u, v}; returns the matching size.
  /// Throws self_loop, duplicate_insert, missing_delete.
  Index update(Index u, Index v, bool present);
  Index size() const { return rank_.rank() / 2; }

  const Matrix& matrix() const { return rank_.matrix(); }
  const UnboundedRank& rank_structure() const { return rank_; }
  bool skew_symmetric() const;

 private:
  Index n_;
  gf::Rng& rng_;
  UnboundedRank rank_;
  std::map<std::pair<Index, Index>, Fp> edges_;
};

/// Biadjacency matrix, left vertices on rows.
class BipartiteMatching {
 public:
  BipartiteMatching(Index left, Index right, gf::Rng& rng, UnboundedRankOptions opts = {});

  Index update(Index u, Index v, bool present);
  Index size() const { return rank_.rank(); }
  const Matrix& matrix() const { return rank_.matrix(); }

 private:
  Index left_, right_;
  gf::Rng& rng_;
  UnboundedRank rank_;
};

/// Maximum weight matching of a bipartite graph with positive integer
/// weights. Vertex u has copies u_1..u_W in H; an edge {u, v} of weight w
/// becomes {u_a, v_(w+1-a)} for a = 1..w, and the biadjacency rank of H is
/// the maximum weight.
class WeightedMatching {
 public:
  /// Copy pools are sized to max_weight and grow when a heavier edge comes.
  WeightedMatching(Index left, Index right, Index max_weight, gf::Rng& rng, UnboundedRankOptions opts = {});

  /// Sets the weight of {u, v}; 0 deletes. Throws negative_weight.
  std::int64_t update(Index u, Index v, std::int64_t w);
  std::int64_t weight() const { return rank_->rank(); }

  Index copies() const { return W_; }
  Index h_row(Index u, Index a) const { return u * W_ + a - 1; }
  Index h_col(Index v, Index a) const { return v * W_ + a - 1; }
  const Matrix& h_matrix() const { return rank_->matrix(); }

 private:
  void rebuild(Index W);

  Index left_, right_, W_;
  gf::Rng& rng_;
  UnboundedRankOptions opts_;
  std::optional<UnboundedRank> rank_;
  std::map<std::pair<Index, Index>, std::vector<Fp>> edges_;  // values of the w copies
};

/// Vertex set of a maximum matching: I of a maximum nonsingular submatrix of
/// the Tutte matrix. When I and J differ after an update the values are
/// redrawn and the maintainer restarts from I = J = a greedy row basis.
class MatchedVertexSet {
 public:
  MatchedVertexSet(Index n, gf::Rng& rng, SubmatrixOptions opts = {});

  /// Sorted vertex set after the update.
  IndexSet update(Index u, Index v, bool present);
  IndexSet vertices() const { return sub_->rows(); }
  std::uint64_t rerandomizations() const { return rerandomizations_; }
  const SubmatrixMaintainer& maintainer() const { return *sub_; }

 private:
  void rerandomize();

  Index n_;
  gf::Rng& rng_;
  SubmatrixOptions opts_;
  std::optional<SubmatrixMaintainer> sub_;
  std::map<std::pair<Index, Index>, Fp> edges_;
  std::uint64_t rerandomizations_ = 0;
};

}  // namespace dynrank
