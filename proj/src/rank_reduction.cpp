#include "dynrank/rank_reduction.hpp"

#include <algorithm>
#include <limits>

namespace dynrank {

BoundedRank::BoundedRank(const Matrix& A, Index k, gf::Rng& rng, BoundedRankOptions opts)
    : n_(A.rows()), k_(k) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "BoundedRank needs a square matrix");
  if (k <= opts.k0) {
    throw Error(Errc::k_too_small, "k = " + std::to_string(k) + " must exceed " + std::to_string(opts.k0));
  }
  r_ = sketch_dimension(n_, k_);
  const Index count = opts.copies > 0 ? opts.copies : boost_count(n_);
  copies_.reserve(static_cast<std::size_t>(count));
  for (Index c = 0; c < count; ++c) {
    Copy copy;
    copy.M = build_sketch(n_, k_, rng);
    copy.N = build_sketch(n_, k_, rng);
    copy.product = apply_right(apply_left(copy.M, A), copy.N);
    copies_.push_back(std::move(copy));
  }
}

Index BoundedRank::current_value() const {
  Index best = 0;
  for (const auto& c : copies_) best = std::max(best, c.inner->rank());
  return std::min(k_, best);
}

Index BoundedRank::activate() {
  if (active_) throw Error(Errc::already_active, "level k = " + std::to_string(k_));
  if (staging_) return finish_staged_activation();
  for (auto& c : copies_) c.inner.emplace(c.product);
  active_ = true;
  last_value_ = current_value();
  return last_value_;
}

Index BoundedRank::deactivate() {
  if (!active_ && !staging_) throw Error(Errc::already_inactive, "level k = " + std::to_string(k_));
  for (auto& c : copies_) {
    c.inner.reset();
    c.snapshot.resize(0, 0);
    c.queue.clear();
  }
  active_ = false;
  staging_ = false;
  return last_value_;
}

std::optional<Index> BoundedRank::update(Index i, const SparseVector& v) {
  if (i < 0 || i >= n_) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  for (auto& c : copies_) {
    auto deltas = propagate_column_update(c.M, c.N, i, v);
    for (const auto& d : deltas)
      for (const auto& e : d.delta) c.product(e.index, d.column) += e.value;
    if (active_) {
      for (const auto& d : deltas) c.inner->column_update(d.column, d.delta);
    } else if (staging_ && !deltas.empty()) {
      c.queue.push_back(std::move(deltas));
    }
  }
  if (!active_) return std::nullopt;
  last_value_ = current_value();
  return last_value_;
}

std::optional<Index> BoundedRank::value() const {
  if (!active_) return std::nullopt;
  return last_value_;
}

void BoundedRank::begin_staged_activation() {
  if (active_ || staging_) throw Error(Errc::already_active, "level k = " + std::to_string(k_));
  for (auto& c : copies_) {
    c.snapshot = c.product;
    c.inner.emplace(r_);
    c.queue.clear();
  }
  staging_ = true;
  staged_columns_ = 0;
}

bool BoundedRank::stage_columns(Index columns) {
  const Index end = std::min(r_, staged_columns_ + columns);
  for (auto& c : copies_) {
    for (Index col = staged_columns_; col < end; ++col) c.inner->set_column(col, c.snapshot.col(col));
  }
  staged_columns_ = end;
  if (staged_columns_ < r_) return false;
  for (auto& c : copies_) c.snapshot.resize(0, 0);
  return true;
}

bool BoundedRank::drain_queue(Index count) {
  bool empty = true;
  for (auto& c : copies_) {
    for (Index t = 0; t < count && !c.queue.empty(); ++t) {
      for (const auto& d : c.queue.front()) c.inner->column_update(d.column, d.delta);
      c.queue.pop_front();
    }
    empty = empty && c.queue.empty();
  }
  if (empty && staged_columns_ == r_) {
    staging_ = false;
    active_ = true;
    last_value_ = current_value();
  }
  return empty;
}

Index BoundedRank::finish_staged_activation() {
  stage_columns(r_);
  drain_queue(std::numeric_limits<Index>::max());
  return last_value_;
}

UnboundedRank::UnboundedRank(const Matrix& A, gf::Rng& rng, UnboundedRankOptions opts)
    : A_(A), n_(A.rows()), opts_(opts) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "UnboundedRank needs a square matrix");
  i_min_ = ceil_log2(kMinLevelK) + 1;
  i_max_ = std::max(i_min_, ceil_log2(n_));
  for (Index i = i_min_; i <= i_max_; ++i) {
    gf::Rng level_rng = rng.split(static_cast<std::uint64_t>(i));
    levels_.emplace_back(A, Index{1} << i, level_rng, BoundedRankOptions{opts.copies, kMinLevelK});
  }

  // Sweep upwards until a level is not saturated.
  for (Index i = i_min_; i <= i_max_; ++i) {
    const Index v = read_level(i);
    rank_ = v;
    j_ = i;
    if (v < (Index{1} << i)) break;
  }
  rebalance();
}

Index UnboundedRank::read_level(Index i) {
  ensure_active(i);
  return *structure(i).value();
}

void UnboundedRank::ensure_active(Index i) {
  BoundedRank& lv = level_mut(i);
  if (lv.active()) return;
  if (lv.staging()) {
    lv.finish_staged_activation();
  } else {
    lv.activate();
  }
  ++activations_;
}

void UnboundedRank::rebalance() {
  for (Index i = i_min_; i <= i_max_; ++i) {
    const Index k = Index{1} << i;
    if (k / 2 <= rank_ && rank_ <= k) ensure_active(i);
  }
  for (Index i = i_min_; i <= i_max_; ++i) {
    BoundedRank& lv = level_mut(i);
    if ((i > j_ + 1 || i < j_ - 2) && (lv.active() || lv.staging())) lv.deactivate();
  }
}

void UnboundedRank::advance_staging() {
  for (Index i = i_min_; i <= i_max_; ++i) {
    BoundedRank& lv = level_mut(i);
    if (!lv.staging() && !lv.active() && (i == j_ - 1 || i == j_ + 1)) lv.begin_staged_activation();
    if (!lv.staging()) continue;
    // Build over 2^i/8 updates, then replay two queued updates per update.
    const Index window = std::max<Index>(1, (Index{1} << i) / 8);
    if (lv.stage_columns(0)) {
      if (lv.drain_queue(2)) ++activations_;
    } else {
      lv.stage_columns((lv.sketch_dim() + window - 1) / window);
    }
  }
}

Index UnboundedRank::update(Index i, const SparseVector& v) {
  if (i < 0 || i >= n_) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= n_) throw Error(Errc::index_out_of_range, "row " + std::to_string(e.index));
  }
  for (const auto& e : v) A_(e.index, i) += e.value;
  for (auto& lv : levels_) lv.update(i, v);

  rank_ = read_level(j_);
  const Index k = Index{1} << j_;
  if (rank_ == k && j_ < i_max_) {
    ++j_;
    rank_ = read_level(j_);
  } else if (4 * rank_ < k && j_ > i_min_) {
    j_ = std::max(i_min_, j_ - 2);
    rank_ = read_level(j_);
  }
  rebalance();
  if (opts_.worst_case_spread) advance_staging();
  return rank_;
}

Index UnboundedRank::entry_update(Index i, Index j, Fp value) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw Error(Errc::index_out_of_range, "entry");
  return update(j, SparseVector{{i, value - A_(i, j)}});
}

bool UnboundedRank::check_invariants() const {
  const Index k = Index{1} << j_;
  if (rank_ > k) return false;
  if (j_ > i_min_ && 4 * rank_ < k) return false;
  for (Index i = i_min_; i <= i_max_; ++i) {
    const Index ki = Index{1} << i;
    const BoundedRank& lv = structure(i);
    if (ki / 2 <= rank_ && rank_ <= ki && !lv.active()) return false;
    if ((i > j_ + 1 || i < j_ - 2) && (lv.active() || lv.staging())) return false;
  }
  return structure(j_).active();
}

}  // namespace dynrank
