#pragma once

// Reference matching solvers used for verification. Boost.Graph does the
// work; vertices are 0-based.

#include <cstdint>
#include <utility>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank::oracle {

using EdgeList = std::vector<std::pair<Index, Index>>;

struct WeightedEdge {
  Index u, v;
  std::int64_t w;
};

/// Maximum matching of a general graph (Edmonds).
EdgeList maximum_matching(Index n, const EdgeList& edges);
Index matching_size(Index n, const EdgeList& edges);

/// Maximum total weight over all matchings, weights >= 0.
std::int64_t max_weight_matching(Index n, const std::vector<WeightedEdge>& edges);

/// G[S] has a perfect matching.
bool has_perfect_matching(Index n, const EdgeList& edges, const IndexSet& S);

}  // namespace dynrank::oracle
