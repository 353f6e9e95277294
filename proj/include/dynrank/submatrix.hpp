#pragma once

// Maximum nonsingular submatrix A_{I,J} under entry updates.
//
// H = [[A, X], [Y, B]] is kept nonsingular by a SingularityDetector, where B
// is a gadget whose leaf switches encode I (tree T', side b) and J (tree T,
// side a). Between updates det(H) is a nonzero multiple of det(A_{I,J}).
// A search relinks one free switch pair along both trees, one probe per
// halving step.

#include <optional>
#include <utility>

#include "dynrank/gadget.hpp"
#include "dynrank/singularity.hpp"

namespace dynrank {

struct SubmatrixOptions {
  bool verify = false;   // cross-check each update against an elimination oracle
  int max_retries = 3;   // x, y resamples before giving up
};

class SubmatrixMaintainer {
 public:
  /// Starts from a maximum nonsingular submatrix found by elimination.
  SubmatrixMaintainer(const Matrix& A, gf::Rng& rng, SubmatrixOptions opts = {});
  /// Starts from given I, J with det(A_{I,J}) != 0, not necessarily maximum.
  /// Throws Error(singular_init).
  SubmatrixMaintainer(const Matrix& A, const IndexSet& I, const IndexSet& J, gf::Rng& rng,
                      SubmatrixOptions opts = {});

  Index n() const { return n_; }
  Index padded() const { return gadget_.padded(); }
  Index rank() const { return k_; }
  Matrix matrix() const { return A_.topLeftCorner(n_, n_); }

  /// Sorted, 0-based.
  IndexSet rows() const;
  IndexSet cols() const;

  /// A(i, j) <- value; returns (I, J).
  std::pair<IndexSet, IndexSet> entry_update(Index i, Index j, Fp value);

  /// One search; on success (i', j') joins I, J.
  std::optional<std::pair<Index, Index>> augment_search();

  /// Decision probes issued by the last augment_search.
  Index last_probes() const { return last_probes_; }
  std::uint64_t resamples() const { return resamples_; }
  /// Cumulative decision probes and accepted gadget edits.
  std::uint64_t total_probes() const { return total_probes_; }
  std::uint64_t relinks() const { return relinks_; }

  const Gadget& gadget() const { return gadget_; }
  const SingularityDetector& detector() const { return *detector_; }

  /// det(A_{I,J}) != 0, H matches its blocks, and every switch is on a leaf
  /// or paired. Uses elimination.
  bool check_invariants() const;

 private:
  std::optional<std::pair<Index, Index>> search_once(bool& failed);
  bool try_gadget(const EntryDeltas& deltas);
  void rebuild(bool resample);
  Index free_u_slot() const;

  Index n_;
  gf::Rng& rng_;
  SubmatrixOptions opts_;
  Matrix A_;  // padded
  Gadget gadget_;
  Vector x_, y_;
  std::optional<SingularityDetector> detector_;
  std::vector<Index> row_slot_, col_slot_;  // -1 when outside I / J
  Index k_ = 0;
  Index last_probes_ = 0;
  std::uint64_t resamples_ = 0;
  std::uint64_t total_probes_ = 0;
  std::uint64_t relinks_ = 0;
};

}  // namespace dynrank
