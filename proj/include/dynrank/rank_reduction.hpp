#pragma once

// Rank maintenance whose update cost scales with rank(A) rather than n.
//
// BoundedRank keeps M^T A N for several sketch pairs and, while active, runs a
// DynamicRank on each product; it reports min(k, rank(A)) as the best copy.
// UnboundedRank stacks BoundedRank levels k = 2^i and keeps only the levels
// near the current rank active.

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "dynrank/dynamic_rank.hpp"
#include "dynrank/sketch.hpp"

namespace dynrank {

struct BoundedRankOptions {
  Index copies = 0;       // 0: boost_count(n)
  Index k0 = kMinLevelK;  // k must exceed this
};

class BoundedRank {
 public:
  BoundedRank(const Matrix& A, Index k, gf::Rng& rng, BoundedRankOptions opts = {});

  Index n() const { return n_; }
  Index k() const { return k_; }
  Index sketch_dim() const { return r_; }
  Index copies() const { return static_cast<Index>(copies_.size()); }
  bool active() const { return active_; }

  /// Builds the inner rank structures; returns min(k, rank(A)) w.h.p.
  Index activate();
  /// Drops the inner structures; returns the last reported value.
  Index deactivate();

  /// A <- A + v e_i^T. Returns min(k, rank(A)) when active.
  std::optional<Index> update(Index i, const SparseVector& v);
  std::optional<Index> value() const;

  const Matrix& product(Index copy) const { return copies_[static_cast<std::size_t>(copy)].product; }
  const SketchMatrix& left_sketch(Index copy) const { return copies_[static_cast<std::size_t>(copy)].M; }
  const SketchMatrix& right_sketch(Index copy) const { return copies_[static_cast<std::size_t>(copy)].N; }

  // Incremental activation, used by the spread mode of UnboundedRank. The
  // inner structures are built column by column from a snapshot of the
  // products; updates arriving meanwhile are queued and replayed later.
  void begin_staged_activation();
  /// Inserts up to `columns` snapshot columns per copy; true when all are in.
  bool stage_columns(Index columns);
  /// Replays up to `count` queued updates; true when the queue is empty.
  bool drain_queue(Index count);
  bool staging() const { return staging_; }
  /// Completes a staged activation at once.
  Index finish_staged_activation();

 private:
  struct Copy {
    SketchMatrix M, N;
    Matrix product;
    std::optional<DynamicRank> inner;
    Matrix snapshot;
    std::deque<std::vector<ColumnDelta>> queue;  // one entry per update of A
  };

  Index current_value() const;

  Index n_ = 0, k_ = 0, r_ = 0;
  std::vector<Copy> copies_;
  bool active_ = false;
  bool staging_ = false;
  Index staged_columns_ = 0;
  Index last_value_ = 0;
};

struct UnboundedRankOptions {
  Index copies = 0;               // per level; 0: boost_count(n)
  bool worst_case_spread = false; // spread activation over future updates
};

class UnboundedRank {
 public:
  UnboundedRank(const Matrix& A, gf::Rng& rng, UnboundedRankOptions opts = {});

  Index n() const { return n_; }
  Index rank() const { return rank_; }
  Index level() const { return j_; }
  Index min_level() const { return i_min_; }
  Index max_level() const { return i_max_; }
  bool level_active(Index i) const { return structure(i).active(); }
  const BoundedRank& structure(Index i) const { return levels_[static_cast<std::size_t>(i - i_min_)]; }

  /// A <- A + v e_i^T; returns rank(A) w.h.p.
  Index update(Index i, const SparseVector& v);
  Index entry_update(Index i, Index j, Fp value);
  const Matrix& matrix() const { return A_; }

  /// The three level invariants, checked against the reported rank. The
  /// lower bound 2^j/4 <= rank is waived at the smallest level.
  bool check_invariants() const;

  std::uint64_t activations() const { return activations_; }

 private:
  BoundedRank& level_mut(Index i) { return levels_[static_cast<std::size_t>(i - i_min_)]; }
  Index read_level(Index i);
  void ensure_active(Index i);
  void rebalance();
  void advance_staging();

  Matrix A_;
  Index n_ = 0;
  Index i_min_ = 0, i_max_ = 0, j_ = 0;
  Index rank_ = 0;
  std::vector<BoundedRank> levels_;
  UnboundedRankOptions opts_;
  std::uint64_t activations_ = 0;
};

}  // namespace dynrank
