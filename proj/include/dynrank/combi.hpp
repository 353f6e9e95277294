#pragma once

// Deterministic maximum matching of a bipartite graph in O(|M|^2) per update.
//
// After each update M is at most one short of maximum. Any augmenting path
// of length three or more lives, up to its end vertices, inside the matched
// vertices V(M); adding one outside neighbor per matched vertex gives a set W
// with an augmenting path in G[W] whenever M is not maximum.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

/// Adjacency matrix whose arcs are also threaded into circular row and column
/// lists, so membership and edits are O(1) and neighbors enumerate in O(deg).
/// Every edge is stored as the two arcs (u, v) and (v, u).
class HybridGraph {
 public:
  explicit HybridGraph(Index n);

  Index n() const { return n_; }
  bool test(Index u, Index v) const;
  /// Throws duplicate_insert / missing_delete / self_loop.
  void insert(Index u, Index v);
  void erase(Index u, Index v);

  /// Neighbors of u in row-list order.
  std::vector<Index> neighbors(Index u) const;
  /// |S| x |S| 0/1 adjacency of G[S] in the order of S.
  std::vector<std::vector<char>> subgraph(const IndexSet& S);
  /// x(v) in N(v) \ S, or nullopt, for every v in S.
  std::vector<std::optional<Index>> external_neighbors(const IndexSet& S);

  /// Grid reads plus list steps, cumulative.
  std::uint64_t steps() const { return steps_; }
  /// Grid, row lists and column lists describe the same arc set.
  bool check_consistency() const;

 private:
  using Node = std::int64_t;
  Node cell(Index u, Index v) const { return static_cast<Node>(u) * n_ + v; }
  Node row_head(Index u) const { return static_cast<Node>(n_) * n_ + u; }
  Node col_head(Index v) const { return static_cast<Node>(n_) * n_ + n_ + v; }
  void link_arc(Index u, Index v);
  void unlink_arc(Index u, Index v);

  Index n_;
  std::vector<char> present_;
  std::vector<Node> row_prev_, row_next_, col_prev_, col_next_;
  std::vector<char> mark_;
  std::uint64_t steps_ = 0;
};

using MatchingEdges = std::vector<std::pair<Index, Index>>;

/// Left vertices are [0, left), right vertices [left, left + right).
class CombiMatcher {
 public:
  CombiMatcher(Index left, Index right);

  Index n() const { return graph_.n(); }
  Index left() const { return left_; }
  /// Returns M as (left, right) pairs sorted by left endpoint.
  /// Throws not_bipartite, duplicate_insert, missing_delete.
  MatchingEdges insert(Index u, Index v);
  MatchingEdges erase(Index u, Index v);

  MatchingEdges matching() const;
  Index size() const { return size_; }
  std::optional<Index> mate(Index v) const;
  const HybridGraph& graph() const { return graph_; }

  /// Steps spent by the last update, graph operations included.
  std::uint64_t last_steps() const { return last_steps_; }
  /// Whether the last update ran the G[W] search, and whether it found a path.
  bool last_searched() const { return last_searched_; }
  bool last_augmented() const { return last_augmented_; }

 private:
  std::pair<Index, Index> oriented(Index u, Index v) const;
  void augment(const IndexSet& freed);

  Index left_;
  HybridGraph graph_;
  std::vector<Index> mate_;  // -1 when free
  Index size_ = 0;
  std::uint64_t last_steps_ = 0, bfs_steps_ = 0;
  bool last_searched_ = false, last_augmented_ = false;
};

}  // namespace dynrank
