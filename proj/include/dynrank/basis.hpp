#pragma once

// Column basis under column updates.
//
// The basis columns sit in the slots of a square matrix B that is watched by
// a rank structure. A new independent column is found by appending products
// A v^(l,k) to a spare slot of B: the root block tells whether any column of A
// is independent of B, and the leftmost descent finds the smallest such index.
// In low-rank mode the rank structures watch M^T B for sparse sketches M, one
// set per power-of-two level, and the products are kept as (M^T A) v.

#include <memory>
#include <optional>
#include <vector>

#include "dynrank/dynamic_rank.hpp"
#include "dynrank/sketch.hpp"

namespace dynrank {

/// A v^(l,k) for every dyadic block: v^(l,k) keeps the entries of v with index
/// in [k 2^l, (k+1) 2^l). Columns beyond A.cols() count as zero, so level
/// log2(N) with N the padded width has a single block holding A v.
class DyadicProducts {
 public:
  DyadicProducts(const Matrix& A, Vector v);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index padded() const { return Index{1} << top_; }
  Index top_level() const { return top_; }
  Index blocks(Index level) const { return padded() >> level; }
  const Vector& v() const { return v_; }

  Vector product(Index level, Index block) const { return levels_[static_cast<std::size_t>(level)].col(block); }

  /// A <- A + u e_i^T; touches one block per level.
  void column_update(Index i, const SparseVector& u);

  /// product(l + 1, k) = product(l, 2k) + product(l, 2k + 1) everywhere.
  bool check_ladder() const;

 private:
  Index rows_, cols_, top_;
  Vector v_;
  std::vector<Matrix> levels_;  // levels_[l] is rows x blocks(l)
};

struct BasisOptions {
  bool low_rank = false;
  Index copies = 0;  // sketches per level in low-rank mode; 0: boost_count(n)
};

class BasisMaintainer {
 public:
  /// Starts from the greedy leftmost basis.
  BasisMaintainer(const Matrix& A, gf::Rng& rng, BasisOptions opts = {});
  /// Starts from the given independent columns, not necessarily spanning.
  /// Throws Error(singular_init) if they are dependent.
  BasisMaintainer(const Matrix& A, const IndexSet& basis, gf::Rng& rng, BasisOptions opts = {});
  ~BasisMaintainer();
  BasisMaintainer(BasisMaintainer&&) noexcept;

  Index n() const { return A_.cols(); }
  Index rank() const { return static_cast<Index>(basis_.size()); }
  const Matrix& matrix() const { return A_; }
  /// Sorted column indices.
  IndexSet basis() const;

  /// A <- A + u e_i^T; returns the new basis.
  IndexSet column_update(Index i, const SparseVector& u);
  IndexSet set_column(Index i, const Vector& column);

  /// Smallest column index independent of the current basis, if any. Does
  /// not change the basis.
  std::optional<Index> find_independent_column();

  Index last_probes() const { return last_probes_; }
  std::uint64_t resamples() const { return resamples_; }
  std::uint64_t total_probes() const { return total_probes_; }
  /// Field multiplications spent inside rank-structure probes, cumulative.
  std::uint64_t probe_mults() const { return probe_mults_; }

  /// Independent, spanning, and consistent products; uses elimination.
  bool check_basis() const;
  bool check_products() const;

 private:
  struct Backend;

  enum class Probe { yes, no, inconsistent };
  std::optional<Index> search(bool& inconsistent);
  void resample();

  Matrix A_;
  gf::Rng& rng_;
  BasisOptions opts_;
  std::vector<Index> basis_;  // insertion order
  std::unique_ptr<Backend> backend_;
  Index last_probes_ = 0;
  std::uint64_t resamples_ = 0;
  std::uint64_t probe_mults_ = 0;
  std::uint64_t total_probes_ = 0;
};

}  // namespace dynrank
