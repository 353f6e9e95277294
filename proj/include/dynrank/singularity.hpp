#pragma once

// First-singularity detection for a nonsingular square matrix H under
// rank-one updates H <- H + c d^T, via Sherman-Morrison. An update that would
// make H singular is reported and not applied.

#include <cstdint>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

enum class UpdateOutcome { applied, would_be_singular };

class SingularityDetector {
 public:
  /// Throws Error(singular_init) if H is singular.
  explicit SingularityDetector(const Matrix& H);

  Index size() const { return H_.rows(); }
  const Matrix& matrix() const { return H_; }
  const Matrix& inverse() const { return Hinv_; }

  /// True iff H + c d^T is singular, i.e. 1 + d^T H^{-1} c = 0.
  /// Costs O(nnz(c) nnz(d)); nothing changes.
  bool would_be_singular(const SparseVector& c, const SparseVector& d) const;

  UpdateOutcome try_rank_one(const SparseVector& c, const SparseVector& d);
  /// H(i, j) += delta.
  UpdateOutcome try_entry_update(Index i, Index j, Fp delta);

  /// Undoes the most recent applied update. Throws Error(empty_log).
  void revert();
  std::size_t log_size() const { return log_.size(); }
  void clear_log() { log_.clear(); }

  std::uint64_t applied_count() const { return applied_; }
  std::uint64_t rejected_count() const { return rejected_; }

 private:
  struct Logged {
    SparseVector c, d;
  };

  void check(const SparseVector& v) const;
  Fp denominator(const SparseVector& c, const SparseVector& d) const;
  void apply(const SparseVector& c, const SparseVector& d, Fp gamma);

  Matrix H_, Hinv_;
  std::vector<Logged> log_;
  std::uint64_t applied_ = 0, rejected_ = 0;
};

}  // namespace dynrank
