#pragma once

// Binary-search gadget: the trees T_{1,n}, their labels, the forest
// B_n(a, b) with switch vertices, its biadjacency matrix, and the block
// matrix H = [[A, X], [Y, B]].
//
// Labels are heap indices over a power-of-two leaf count n: label 1 is the
// root {0..n-1}, label h has children 2h and 2h+1, and leaf i has label n+i.
// Interval ends are 0-based and inclusive.
//
// Layout of B (size 4n-2), left side = rows, right side = columns:
//   rows:    T labeled (leaves first, then internal in heap order) | T' unlabeled | v_0..v_{n-1}
//   columns: T' labeled (same order)                               | T unlabeled  | u_0..u_{n-1}
// The unlabeled vertex below internal label h sits at offset h-1 of its block.
// Side a (tree T, switches u) selects columns of A; side b (tree T',
// switches v) selects rows of A.

#include <string>
#include <utility>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

using Label = Index;

enum class TreeOrder { leaves_first, breadth_first };

class GadgetTree {
 public:
  /// n must be a power of two.
  explicit GadgetTree(Index n);

  Index leaves() const { return n_; }
  Index labeled_count() const { return 2 * n_ - 1; }
  Index unlabeled_count() const { return n_ - 1; }

  static constexpr Label root() { return 1; }
  Label leaf(Index i) const;
  bool is_leaf(Label h) const { return h >= n_; }
  bool valid(Label h) const { return h >= 1 && h < 2 * n_; }
  /// Throws Error(bad_label) unless [l, r] is the interval of some vertex.
  Label label(Index l, Index r) const;
  std::pair<Index, Index> interval(Label h) const;

  /// Position of a labeled vertex among all labeled vertices.
  Index labeled_index(Label h, TreeOrder order = TreeOrder::leaves_first) const;
  /// Position of the unlabeled vertex below internal label h.
  Index unlabeled_index(Label h) const { return h - 1; }

 private:
  Index n_;
  Index depth_;
};

/// Unlabeled vertices as rows, labeled vertices as columns.
Matrix tree_biadjacency(const GadgetTree& t, TreeOrder order = TreeOrder::leaves_first);

enum class GadgetSide { a, b };

struct EntryDelta {
  Index row;
  Index col;
  Fp delta;
};
using EntryDeltas = std::vector<EntryDelta>;

/// M <- M + c d^T
struct RankOne {
  SparseVector c;
  SparseVector d;
};

/// Deltas that all share one row or one column, as a single rank-one step.
RankOne as_rank_one(const EntryDeltas& deltas, Index offset = 0);

class Gadget {
 public:
  /// Pads n to the next power of two N; every u_s is paired with v_s.
  explicit Gadget(Index n);
  /// B_n(a, b): u_s on label a_s of T, v_s on label b_s of T', and u_s - v_s
  /// for s >= |a|. Throws Error(bad_label).
  static Gadget build(Index n, const std::vector<Label>& a, const std::vector<Label>& b);

  Index n() const { return n_; }
  Index padded() const { return tree_.leaves(); }
  Index dim() const { return 4 * padded() - 2; }
  const GadgetTree& tree() const { return tree_; }
  const Matrix& matrix() const { return B_; }

  Index label_row(Label h) const;  // vertex of T
  Index label_col(Label h) const;  // vertex of T'
  Index t_unlabeled_col(Label h) const { return 2 * padded() - 1 + tree_.unlabeled_index(h); }
  Index tp_unlabeled_row(Label h) const { return 2 * padded() - 1 + tree_.unlabeled_index(h); }
  Index u_col(Index s) const { return 3 * padded() - 2 + s; }
  Index v_row(Index s) const { return 3 * padded() - 2 + s; }

  /// Labels adjacent to a switch on its own tree.
  std::vector<Label> switch_labels(GadgetSide side, Index slot) const;
  /// Opposite switches adjacent to a switch.
  std::vector<Index> switch_partners(GadgetSide side, Index slot) const;

  // Planned edits; nothing changes until apply().
  /// Moves the single edge of a switch to the vertex with label `to`, or
  /// attaches an isolated switch there.
  EntryDeltas plan_relink(GadgetSide side, Index slot, Label to) const;
  /// Moves the single edge of a switch to the opposite switch `partner`.
  EntryDeltas plan_pair(GadgetSide side, Index slot, Index partner) const;
  EntryDeltas plan_add_edge(GadgetSide side, Index slot, Label to) const;
  EntryDeltas plan_remove_edge(GadgetSide side, Index slot, Label from) const;

  void apply(const EntryDeltas& deltas);
  /// plan_relink followed by apply.
  EntryDeltas relink(GadgetSide side, Index slot, Label to);

  bool is_forest() const;
  std::string to_dot() const;

 private:
  void check_slot(Index slot) const;
  void check_label(Label h) const;
  // The only neighbour of a switch, as a row (side a) or column (side b);
  // -1 for an isolated switch.
  Index single_neighbor(GadgetSide side, Index slot) const;
  EntryDeltas move(GadgetSide side, Index slot, Index to) const;

  Index n_;
  GadgetTree tree_;
  Matrix B_;
};

struct BlockMatrixH {
  Matrix A;
  Matrix B;
  Vector x;
  Vector y;
  Matrix H;
};

/// H = [[A, X], [Y, B]] with X(i, i) = x_i and Y(i, i) = y_i for i < n.
Matrix assemble_H(const Matrix& A, const Matrix& B, const Vector& x, const Vector& y);
/// Same with fresh nonzero x, y.
BlockMatrixH assemble_H(const Matrix& A, const Matrix& B, gf::Rng& rng);

}  // namespace dynrank
