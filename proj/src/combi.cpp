#include "dynrank/combi.hpp"

#include <algorithm>
#include <string>

namespace dynrank {

namespace {

void check_vertex(Index u, Index n) {
  if (u < 0 || u >= n) throw Error(Errc::index_out_of_range, "vertex " + std::to_string(u));
}

}  // namespace

HybridGraph::HybridGraph(Index n) : n_(n) {
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t nodes = cells + 2 * static_cast<std::size_t>(n);
  present_.assign(cells, 0);
  row_prev_.resize(nodes);
  row_next_.resize(nodes);
  col_prev_.resize(nodes);
  col_next_.resize(nodes);
  for (Index u = 0; u < n; ++u) {
    row_prev_[row_head(u)] = row_next_[row_head(u)] = row_head(u);
    col_prev_[col_head(u)] = col_next_[col_head(u)] = col_head(u);
  }
  mark_.assign(static_cast<std::size_t>(n), 0);
}

bool HybridGraph::test(Index u, Index v) const {
  check_vertex(u, n_);
  check_vertex(v, n_);
  return present_[static_cast<std::size_t>(cell(u, v))] != 0;
}

void HybridGraph::link_arc(Index u, Index v) {
  const Node c = cell(u, v);
  present_[static_cast<std::size_t>(c)] = 1;
  const Node r = row_head(u), k = col_head(v);
  row_next_[c] = row_next_[r];
  row_prev_[c] = r;
  row_prev_[row_next_[r]] = c;
  row_next_[r] = c;
  col_next_[c] = col_next_[k];
  col_prev_[c] = k;
  col_prev_[col_next_[k]] = c;
  col_next_[k] = c;
  steps_ += 1;
}

void HybridGraph::unlink_arc(Index u, Index v) {
  const Node c = cell(u, v);
  present_[static_cast<std::size_t>(c)] = 0;
  row_next_[row_prev_[c]] = row_next_[c];
  row_prev_[row_next_[c]] = row_prev_[c];
  col_next_[col_prev_[c]] = col_next_[c];
  col_prev_[col_next_[c]] = col_prev_[c];
  steps_ += 1;
}

void HybridGraph::insert(Index u, Index v) {
  if (u == v) throw Error(Errc::self_loop, "self loop at " + std::to_string(u));
  if (test(u, v)) throw Error(Errc::duplicate_insert, "edge already present");
  link_arc(u, v);
  link_arc(v, u);
}

void HybridGraph::erase(Index u, Index v) {
  if (!test(u, v)) throw Error(Errc::missing_delete, "edge not present");
  unlink_arc(u, v);
  unlink_arc(v, u);
}

std::vector<Index> HybridGraph::neighbors(Index u) const {
  check_vertex(u, n_);
  std::vector<Index> out;
  for (Node c = row_next_[row_head(u)]; c != row_head(u); c = row_next_[c]) out.push_back(static_cast<Index>(c % n_));
  return out;
}

std::vector<std::vector<char>> HybridGraph::subgraph(const IndexSet& S) {
  detail::check_indices(S, n_, "subgraph");
  std::vector<std::vector<char>> out(S.size(), std::vector<char>(S.size(), 0));
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = 0; b < S.size(); ++b) out[a][b] = present_[static_cast<std::size_t>(cell(S[a], S[b]))];
  steps_ += S.size() * S.size();
  return out;
}

std::vector<std::optional<Index>> HybridGraph::external_neighbors(const IndexSet& S) {
  detail::check_indices(S, n_, "external_neighbors");
  for (Index v : S) mark_[static_cast<std::size_t>(v)] = 1;
  // At most |S| - 1 neighbors of v lie in S, so a walk ends within |S| steps.
  std::vector<std::optional<Index>> x(S.size());
  for (std::size_t s = 0; s < S.size(); ++s) {
    const Node head = row_head(S[s]);
    for (Node c = row_next_[head]; c != head; c = row_next_[c]) {
      ++steps_;
      const auto w = static_cast<Index>(c % n_);
      if (!mark_[static_cast<std::size_t>(w)]) {
        x[s] = w;
        break;
      }
    }
    ++steps_;
  }
  for (Index v : S) mark_[static_cast<std::size_t>(v)] = 0;
  return x;
}

bool HybridGraph::check_consistency() const {
  std::vector<char> seen_row(present_.size(), 0), seen_col(present_.size(), 0);
  const Node cells = static_cast<Node>(present_.size());
  for (Index u = 0; u < n_; ++u) {
    for (Node c = row_next_[row_head(u)]; c != row_head(u); c = row_next_[c]) {
      if (c >= cells || c / n_ != u || !present_[static_cast<std::size_t>(c)] || row_prev_[row_next_[c]] != c) return false;
      seen_row[static_cast<std::size_t>(c)] = 1;
    }
    for (Node c = col_next_[col_head(u)]; c != col_head(u); c = col_next_[c]) {
      if (c >= cells || c % n_ != u || !present_[static_cast<std::size_t>(c)] || col_prev_[col_next_[c]] != c) return false;
      seen_col[static_cast<std::size_t>(c)] = 1;
    }
  }
  for (Index u = 0; u < n_; ++u)
    for (Index v = 0; v < n_; ++v) {
      const auto c = static_cast<std::size_t>(cell(u, v));
      if (present_[c] != seen_row[c] || present_[c] != seen_col[c]) return false;
      if (present_[c] != present_[static_cast<std::size_t>(cell(v, u))]) return false;
    }
  return true;
}

CombiMatcher::CombiMatcher(Index left, Index right)
    : left_(left), graph_(left + right), mate_(static_cast<std::size_t>(left + right), -1) {}

std::pair<Index, Index> CombiMatcher::oriented(Index u, Index v) const {
  check_vertex(u, n());
  check_vertex(v, n());
  if ((u < left_) == (v < left_)) throw Error(Errc::not_bipartite, "edge within one side");
  return u < left_ ? std::make_pair(u, v) : std::make_pair(v, u);
}

std::optional<Index> CombiMatcher::mate(Index v) const {
  check_vertex(v, n());
  const Index m = mate_[static_cast<std::size_t>(v)];
  return m < 0 ? std::nullopt : std::optional<Index>(m);
}

MatchingEdges CombiMatcher::matching() const {
  MatchingEdges out;
  for (Index u = 0; u < left_; ++u)
    if (mate_[static_cast<std::size_t>(u)] >= 0) out.emplace_back(u, mate_[static_cast<std::size_t>(u)]);
  return out;
}

MatchingEdges CombiMatcher::insert(Index u, Index v) {
  const auto [a, b] = oriented(u, v);
  const std::uint64_t before = graph_.steps();
  bfs_steps_ = 0;
  last_searched_ = last_augmented_ = false;
  graph_.insert(a, b);
  if (mate_[static_cast<std::size_t>(a)] < 0 && mate_[static_cast<std::size_t>(b)] < 0) {
    mate_[static_cast<std::size_t>(a)] = b;
    mate_[static_cast<std::size_t>(b)] = a;
    ++size_;
  } else {
    augment({});
  }
  last_steps_ = graph_.steps() - before + bfs_steps_;
  return matching();
}

MatchingEdges CombiMatcher::erase(Index u, Index v) {
  const auto [a, b] = oriented(u, v);
  const std::uint64_t before = graph_.steps();
  bfs_steps_ = 0;
  last_searched_ = last_augmented_ = false;
  graph_.erase(a, b);
  if (mate_[static_cast<std::size_t>(a)] == b) {
    mate_[static_cast<std::size_t>(a)] = mate_[static_cast<std::size_t>(b)] = -1;
    --size_;
    augment({a, b});
  }
  last_steps_ = graph_.steps() - before + bfs_steps_;
  return matching();
}

void CombiMatcher::augment(const IndexSet& freed) {
  last_searched_ = true;
  // The endpoints of a deleted matching edge may have free neighbors, which
  // would leave M non-maximal; scanning them too covers length-one paths.
  IndexSet S = freed;
  for (Index v = 0; v < n(); ++v)
    if (mate_[static_cast<std::size_t>(v)] >= 0) S.push_back(v);
  std::sort(S.begin(), S.end());
  const auto x = graph_.external_neighbors(S);
  IndexSet W = S;
  for (const auto& w : x)
    if (w) W.push_back(*w);
  std::sort(W.begin(), W.end());
  W.erase(std::unique(W.begin(), W.end()), W.end());
  const auto adj = graph_.subgraph(W);

  // Layered BFS over positions in W. Layers are expanded in increasing label
  // order, so each vertex keeps the smallest predecessor of the layer before.
  const std::size_t k = W.size();
  std::vector<std::ptrdiff_t> pred(k, -1);
  std::vector<char> seen(k, 0);
  std::vector<std::ptrdiff_t> pos_of(static_cast<std::size_t>(n()), -1);
  for (std::size_t s = 0; s < k; ++s) pos_of[static_cast<std::size_t>(W[s])] = static_cast<std::ptrdiff_t>(s);
  auto mate_of = [&](std::size_t s) { return mate_[static_cast<std::size_t>(W[s])]; };

  std::vector<std::size_t> layer;
  for (std::size_t s = 0; s < k; ++s)
    if (W[s] < left_ && mate_of(s) < 0) {
      layer.push_back(s);
      seen[s] = 1;
    }
  std::optional<std::size_t> end;
  while (!layer.empty() && !end) {
    std::vector<std::size_t> right;
    for (std::size_t a : layer) {
      bfs_steps_ += k;
      for (std::size_t b = 0; b < k; ++b)
        if (adj[a][b] && !seen[b] && mate_of(a) != W[b]) {
          seen[b] = 1;
          pred[b] = static_cast<std::ptrdiff_t>(a);
          right.push_back(b);
        }
    }
    std::sort(right.begin(), right.end());
    std::vector<std::size_t> next;
    for (std::size_t b : right) {
      if (mate_of(b) < 0) {
        end = b;
        break;
      }
      const auto m = static_cast<std::size_t>(pos_of[static_cast<std::size_t>(mate_of(b))]);
      if (!seen[m]) {
        seen[m] = 1;
        pred[m] = static_cast<std::ptrdiff_t>(b);
        next.push_back(m);
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  if (!end) return;

  std::ptrdiff_t b = static_cast<std::ptrdiff_t>(*end);
  while (b >= 0) {
    const auto a = static_cast<std::size_t>(pred[static_cast<std::size_t>(b)]);
    const std::ptrdiff_t previous = pred[a];
    mate_[static_cast<std::size_t>(W[a])] = W[static_cast<std::size_t>(b)];
    mate_[static_cast<std::size_t>(W[static_cast<std::size_t>(b)])] = W[a];
    b = previous;
  }
  ++size_;
  last_augmented_ = true;
}

}  // namespace dynrank
