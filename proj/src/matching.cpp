#include "dynrank/matching.hpp"

#include <algorithm>
#include <string>

namespace dynrank {

namespace {

void check_vertex(Index u, Index n, const char* what) {
  if (u < 0 || u >= n) throw Error(Errc::index_out_of_range, std::string(what) + " vertex " + std::to_string(u));
}

std::pair<Index, Index> ordered(Index u, Index v) { return {std::min(u, v), std::max(u, v)}; }

template <class Map>
void check_presence(const Map& edges, const typename Map::key_type& key, bool present) {
  const bool has = edges.count(key) != 0;
  if (present && has) throw Error(Errc::duplicate_insert, "edge already present");
  if (!present && !has) throw Error(Errc::missing_delete, "edge not present");
}

}  // namespace

GeneralMatching::GeneralMatching(Index n, gf::Rng& rng, UnboundedRankOptions opts)
    : n_(n), rng_(rng), rank_(zeros(n, n), rng, opts) {}

Index GeneralMatching::update(Index u, Index v, bool present) {
  check_vertex(u, n_, "general");
  check_vertex(v, n_, "general");
  if (u == v) throw Error(Errc::self_loop, "self loop at " + std::to_string(u));
  const auto key = ordered(u, v);
  check_presence(edges_, key, present);
  Fp x = gf::zero();
  if (present) {
    x = gf::sample_nonzero(rng_);
    edges_[key] = x;
  } else {
    edges_.erase(key);
  }
  rank_.entry_update(key.first, key.second, x);
  rank_.entry_update(key.second, key.first, -x);
  return size();
}

bool GeneralMatching::skew_symmetric() const {
  const Matrix& A = matrix();
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j <= i; ++j)
      if (A(i, j) != -A(j, i)) return false;
  return true;
}

BipartiteMatching::BipartiteMatching(Index left, Index right, gf::Rng& rng, UnboundedRankOptions opts)
    : left_(left), right_(right), rng_(rng), rank_(zeros(std::max(left, right), std::max(left, right)), rng, opts) {}

Index BipartiteMatching::update(Index u, Index v, bool present) {
  check_vertex(u, left_, "left");
  check_vertex(v, right_, "right");
  const bool has = !matrix()(u, v).is_zero();
  if (present && has) throw Error(Errc::duplicate_insert, "edge already present");
  if (!present && !has) throw Error(Errc::missing_delete, "edge not present");
  return rank_.entry_update(u, v, present ? gf::sample_nonzero(rng_) : gf::zero());
}

WeightedMatching::WeightedMatching(Index left, Index right, Index max_weight, gf::Rng& rng, UnboundedRankOptions opts)
    : left_(left), right_(right), W_(std::max<Index>(max_weight, 1)), rng_(rng), opts_(opts) {
  rebuild(W_);
}

void WeightedMatching::rebuild(Index W) {
  W_ = W;
  const Index n = std::max(left_, right_) * W_;
  Matrix H = zeros(n, n);
  for (const auto& [key, values] : edges_) {
    const Index w = static_cast<Index>(values.size());
    for (Index a = 1; a <= w; ++a) H(h_row(key.first, a), h_col(key.second, w + 1 - a)) = values[static_cast<std::size_t>(a - 1)];
  }
  rank_.emplace(H, rng_, opts_);
}

std::int64_t WeightedMatching::update(Index u, Index v, std::int64_t w) {
  check_vertex(u, left_, "left");
  check_vertex(v, right_, "right");
  if (w < 0) throw Error(Errc::negative_weight, "weight " + std::to_string(w));
  const auto key = std::make_pair(u, v);
  if (auto it = edges_.find(key); it != edges_.end()) {
    const Index old = static_cast<Index>(it->second.size());
    for (Index a = 1; a <= old; ++a) rank_->entry_update(h_row(u, a), h_col(v, old + 1 - a), gf::zero());
    edges_.erase(it);
  }
  if (w == 0) return weight();
  std::vector<Fp> values(static_cast<std::size_t>(w));
  for (auto& x : values) x = gf::sample_nonzero(rng_);
  edges_[key] = values;
  if (w > W_) {
    rebuild(std::max<Index>(w, 2 * W_));
    return weight();
  }
  for (Index a = 1; a <= w; ++a) rank_->entry_update(h_row(u, a), h_col(v, w + 1 - a), values[static_cast<std::size_t>(a - 1)]);
  return weight();
}

MatchedVertexSet::MatchedVertexSet(Index n, gf::Rng& rng, SubmatrixOptions opts) : n_(n), rng_(rng), opts_(opts) {
  sub_.emplace(zeros(n, n), IndexSet{}, IndexSet{}, rng_, opts_);
}

IndexSet MatchedVertexSet::update(Index u, Index v, bool present) {
  check_vertex(u, n_, "general");
  check_vertex(v, n_, "general");
  if (u == v) throw Error(Errc::self_loop, "self loop at " + std::to_string(u));
  const auto key = ordered(u, v);
  check_presence(edges_, key, present);
  Fp x = gf::zero();
  if (present) {
    x = gf::sample_nonzero(rng_);
    edges_[key] = x;
  } else {
    edges_.erase(key);
  }
  sub_->entry_update(key.first, key.second, x);
  sub_->entry_update(key.second, key.first, -x);
  if (sub_->rows() != sub_->cols()) rerandomize();
  return vertices();
}

void MatchedVertexSet::rerandomize() {
  ++rerandomizations_;
  Matrix A = zeros(n_, n_);
  for (auto& [key, x] : edges_) {
    x = gf::sample_nonzero(rng_);
    A(key.first, key.second) = x;
    A(key.second, key.first) = -x;
  }
  // The principal minor on a row basis of a skew-symmetric matrix is
  // nonsingular.
  const IndexSet I = greedy_row_basis(A);
  sub_.reset();
  sub_.emplace(A, I, I, rng_, opts_);
}

}  // namespace dynrank
