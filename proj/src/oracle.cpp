#include "dynrank/oracle.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <boost/graph/maximum_weighted_matching.hpp>

namespace dynrank::oracle {

namespace {

using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
using WeightedGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                            boost::property<boost::edge_weight_t, std::int64_t>>;

std::vector<std::size_t> mates(Index n, const EdgeList& edges) {
  Graph g(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), g);
  std::vector<std::size_t> mate(static_cast<std::size_t>(n));
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  return mate;
}

}  // namespace

EdgeList maximum_matching(Index n, const EdgeList& edges) {
  if (n == 0) return {};
  const auto mate = mates(n, edges);
  const auto none = boost::graph_traits<Graph>::null_vertex();
  EdgeList out;
  for (std::size_t u = 0; u < mate.size(); ++u)
    if (mate[u] != none && u < mate[u]) out.emplace_back(static_cast<Index>(u), static_cast<Index>(mate[u]));
  return out;
}

Index matching_size(Index n, const EdgeList& edges) { return static_cast<Index>(maximum_matching(n, edges).size()); }

std::int64_t max_weight_matching(Index n, const std::vector<WeightedEdge>& edges) {
  if (n == 0) return 0;
  WeightedGraph g(static_cast<std::size_t>(n));
  for (const auto& e : edges)
    if (e.w > 0) boost::add_edge(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v), e.w, g);
  std::vector<std::size_t> mate(static_cast<std::size_t>(n));
  boost::maximum_weighted_matching(g, &mate[0]);
  return boost::matching_weight_sum(g, &mate[0]);
}

bool has_perfect_matching(Index n, const EdgeList& edges, const IndexSet& S) {
  std::vector<Index> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t s = 0; s < S.size(); ++s) pos[static_cast<std::size_t>(S[s])] = static_cast<Index>(s);
  EdgeList induced;
  for (const auto& [u, v] : edges) {
    const Index a = pos[static_cast<std::size_t>(u)], b = pos[static_cast<std::size_t>(v)];
    if (a >= 0 && b >= 0) induced.emplace_back(a, b);
  }
  const auto k = static_cast<Index>(S.size());
  return k % 2 == 0 && 2 * matching_size(k, induced) == k;
}

}  // namespace dynrank::oracle
