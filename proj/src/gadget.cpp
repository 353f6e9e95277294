#include "dynrank/gadget.hpp"

#include <numeric>
#include <sstream>

#include "dynrank/sketch.hpp"

namespace dynrank {

GadgetTree::GadgetTree(Index n) : n_(n), depth_(ceil_log2(n)) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw Error(Errc::dimension_mismatch, "tree leaf count must be a power of two, got " + std::to_string(n));
  }
}

Label GadgetTree::leaf(Index i) const {
  if (i < 0 || i >= n_) throw Error(Errc::bad_label, "leaf " + std::to_string(i));
  return n_ + i;
}

std::pair<Index, Index> GadgetTree::interval(Label h) const {
  if (!valid(h)) throw Error(Errc::bad_label, "label " + std::to_string(h));
  Index level = 0;  // distance from the leaves
  Index x = h;
  while (x < n_) {
    x <<= 1;
    ++level;
  }
  const Index l = x - n_;
  return {l, l + (Index{1} << level) - 1};
}

Label GadgetTree::label(Index l, Index r) const {
  const Index len = r - l + 1;
  if (l < 0 || r >= n_ || len < 1 || (len & (len - 1)) != 0 || l % len != 0) {
    throw Error(Errc::bad_label, "[" + std::to_string(l) + ", " + std::to_string(r) + "] is not a tree label");
  }
  return (n_ + l) / len;
}

Index GadgetTree::labeled_index(Label h, TreeOrder order) const {
  if (!valid(h)) throw Error(Errc::bad_label, "label " + std::to_string(h));
  if (order == TreeOrder::breadth_first) return h - 1;
  return is_leaf(h) ? h - n_ : n_ + h - 1;
}

Matrix tree_biadjacency(const GadgetTree& t, TreeOrder order) {
  Matrix out = zeros(t.unlabeled_count(), t.labeled_count());
  for (Label h = 1; h < t.leaves(); ++h) {
    const Index row = t.unlabeled_index(h);
    out(row, t.labeled_index(h, order)) = gf::one();
    out(row, t.labeled_index(2 * h, order)) = gf::one();
    out(row, t.labeled_index(2 * h + 1, order)) = gf::one();
  }
  return out;
}

RankOne as_rank_one(const EntryDeltas& deltas, Index offset) {
  RankOne out;
  if (deltas.empty()) return out;
  const Index row = deltas.front().row, col = deltas.front().col;
  bool same_row = true, same_col = true;
  for (const auto& d : deltas) {
    same_row = same_row && d.row == row;
    same_col = same_col && d.col == col;
  }
  if (same_col) {
    for (const auto& d : deltas) out.c.push_back({d.row + offset, d.delta});
    out.d.push_back({col + offset, gf::one()});
  } else if (same_row) {
    out.c.push_back({row + offset, gf::one()});
    for (const auto& d : deltas) out.d.push_back({d.col + offset, d.delta});
  } else {
    throw Error(Errc::dimension_mismatch, "deltas do not form a rank-one step");
  }
  return out;
}

Gadget::Gadget(Index n) : n_(n), tree_(Index{1} << ceil_log2(std::max<Index>(n, 1))) {
  if (n < 1) throw Error(Errc::dimension_mismatch, "gadget needs n >= 1");
  B_ = zeros(dim(), dim());
  const Index N = padded();
  const Matrix tb = tree_biadjacency(tree_);
  // T: labeled on the left, unlabeled on the right.
  for (Index u = 0; u < N - 1; ++u)
    for (Index l = 0; l < 2 * N - 1; ++l)
      if (!tb(u, l).is_zero()) {
        B_(l, 2 * N - 1 + u) = gf::one();
        B_(2 * N - 1 + u, l) = gf::one();  // T': unlabeled left, labeled right
      }
  for (Index s = 0; s < N; ++s) B_(v_row(s), u_col(s)) = gf::one();
}

Gadget Gadget::build(Index n, const std::vector<Label>& a, const std::vector<Label>& b) {
  Gadget g(n);
  if (a.size() != b.size() || static_cast<Index>(a.size()) > g.padded()) {
    throw Error(Errc::dimension_mismatch, "assignments must have equal length at most n");
  }
  for (std::size_t s = 0; s < a.size(); ++s) {
    g.check_label(a[s]);
    g.check_label(b[s]);
    const auto slot = static_cast<Index>(s);
    g.B_(g.v_row(slot), g.u_col(slot)) = gf::zero();
    g.B_(g.label_row(a[s]), g.u_col(slot)) = gf::one();
    g.B_(g.v_row(slot), g.label_col(b[s])) = gf::one();
  }
  return g;
}

void Gadget::check_slot(Index slot) const {
  if (slot < 0 || slot >= padded()) throw Error(Errc::index_out_of_range, "switch " + std::to_string(slot));
}

void Gadget::check_label(Label h) const {
  if (!tree_.valid(h)) throw Error(Errc::bad_label, "label " + std::to_string(h));
}

Index Gadget::label_row(Label h) const { return tree_.labeled_index(h); }
Index Gadget::label_col(Label h) const { return tree_.labeled_index(h); }

std::vector<Label> Gadget::switch_labels(GadgetSide side, Index slot) const {
  check_slot(slot);
  std::vector<Label> out;
  for (Label h = 1; h < 2 * padded(); ++h) {
    const bool edge = side == GadgetSide::a ? !B_(label_row(h), u_col(slot)).is_zero()
                                            : !B_(v_row(slot), label_col(h)).is_zero();
    if (edge) out.push_back(h);
  }
  return out;
}

std::vector<Index> Gadget::switch_partners(GadgetSide side, Index slot) const {
  check_slot(slot);
  std::vector<Index> out;
  for (Index t = 0; t < padded(); ++t) {
    const bool edge = side == GadgetSide::a ? !B_(v_row(t), u_col(slot)).is_zero()
                                            : !B_(v_row(slot), u_col(t)).is_zero();
    if (edge) out.push_back(t);
  }
  return out;
}

Index Gadget::single_neighbor(GadgetSide side, Index slot) const {
  check_slot(slot);
  Index found = -1;
  for (Index k = 0; k < dim(); ++k) {
    const Fp e = side == GadgetSide::a ? B_(k, u_col(slot)) : B_(v_row(slot), k);
    if (e.is_zero()) continue;
    if (found >= 0) throw Error(Errc::bad_label, "switch " + std::to_string(slot) + " has several edges");
    found = k;
  }
  return found;
}

EntryDeltas Gadget::move(GadgetSide side, Index slot, Index to) const {
  const Index from = single_neighbor(side, slot);
  if (from == to) return {};
  EntryDeltas out;
  if (side == GadgetSide::a) {
    if (from >= 0) out.push_back({from, u_col(slot), -gf::one()});
    out.push_back({to, u_col(slot), gf::one()});
  } else {
    if (from >= 0) out.push_back({v_row(slot), from, -gf::one()});
    out.push_back({v_row(slot), to, gf::one()});
  }
  return out;
}

EntryDeltas Gadget::plan_relink(GadgetSide side, Index slot, Label to) const {
  check_label(to);
  return move(side, slot, side == GadgetSide::a ? label_row(to) : label_col(to));
}

EntryDeltas Gadget::plan_pair(GadgetSide side, Index slot, Index partner) const {
  check_slot(partner);
  return move(side, slot, side == GadgetSide::a ? v_row(partner) : u_col(partner));
}

EntryDeltas Gadget::plan_add_edge(GadgetSide side, Index slot, Label to) const {
  check_slot(slot);
  check_label(to);
  const Index row = side == GadgetSide::a ? label_row(to) : v_row(slot);
  const Index col = side == GadgetSide::a ? u_col(slot) : label_col(to);
  if (!B_(row, col).is_zero()) return {};
  return {{row, col, gf::one()}};
}

EntryDeltas Gadget::plan_remove_edge(GadgetSide side, Index slot, Label from) const {
  check_slot(slot);
  check_label(from);
  const Index row = side == GadgetSide::a ? label_row(from) : v_row(slot);
  const Index col = side == GadgetSide::a ? u_col(slot) : label_col(from);
  if (B_(row, col).is_zero()) return {};
  return {{row, col, -gf::one()}};
}

void Gadget::apply(const EntryDeltas& deltas) {
  for (const auto& d : deltas) B_(d.row, d.col) += d.delta;
}

EntryDeltas Gadget::relink(GadgetSide side, Index slot, Label to) {
  EntryDeltas d = plan_relink(side, slot, to);
  apply(d);
  return d;
}

bool Gadget::is_forest() const {
  // Vertices: rows 0..dim-1, columns dim..2dim-1.
  const Index m = dim();
  std::vector<Index> parent(static_cast<std::size_t>(2 * m));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < m; ++c) {
      if (B_(r, c).is_zero()) continue;
      const Index a = find(r), b = find(m + c);
      if (a == b) return false;
      parent[static_cast<std::size_t>(a)] = b;
    }
  return true;
}

std::string Gadget::to_dot() const {
  const Index N = padded();
  auto interval_name = [&](Label h) {
    const auto [l, r] = tree_.interval(h);
    std::string s = "{" + std::to_string(l + 1);
    if (r > l) s += ".." + std::to_string(r + 1);
    return s + "}";
  };
  auto row_name = [&](Index r) -> std::string {
    if (r < 2 * N - 1) {
      for (Label h = 1; h < 2 * N; ++h)
        if (label_row(h) == r) return "T" + interval_name(h);
    }
    if (r < 3 * N - 2) return "Tp_inner" + std::to_string(r - (2 * N - 1) + 1);
    return "v" + std::to_string(r - (3 * N - 2) + 1);
  };
  auto col_name = [&](Index c) -> std::string {
    if (c < 2 * N - 1) {
      for (Label h = 1; h < 2 * N; ++h)
        if (label_col(h) == c) return "Tp" + interval_name(h);
    }
    if (c < 3 * N - 2) return "T_inner" + std::to_string(c - (2 * N - 1) + 1);
    return "u" + std::to_string(c - (3 * N - 2) + 1);
  };
  std::ostringstream os;
  os << "graph gadget {\n";
  for (Index r = 0; r < dim(); ++r) os << "  r" << r << " [label=\"" << row_name(r) << "\"];\n";
  for (Index c = 0; c < dim(); ++c) os << "  c" << c << " [label=\"" << col_name(c) << "\", shape=box];\n";
  for (Index r = 0; r < dim(); ++r)
    for (Index c = 0; c < dim(); ++c)
      if (!B_(r, c).is_zero()) os << "  r" << r << " -- c" << c << ";\n";
  os << "}\n";
  return os.str();
}

Matrix assemble_H(const Matrix& A, const Matrix& B, const Vector& x, const Vector& y) {
  const Index n = A.rows();
  if (A.cols() != n || B.rows() != B.cols() || B.rows() != 4 * n - 2 || x.size() != n || y.size() != n) {
    throw Error(Errc::dimension_mismatch, "H needs A n x n, B (4n-2) x (4n-2), x and y of length n");
  }
  const Index m = B.rows();
  Matrix H = zeros(n + m, n + m);
  H.topLeftCorner(n, n) = A;
  H.bottomRightCorner(m, m) = B;
  for (Index i = 0; i < n; ++i) {
    H(i, n + i) = x(i);
    H(n + i, i) = y(i);
  }
  return H;
}

BlockMatrixH assemble_H(const Matrix& A, const Matrix& B, gf::Rng& rng) {
  BlockMatrixH out;
  out.A = A;
  out.B = B;
  out.x.resize(A.rows());
  out.y.resize(A.rows());
  for (Index i = 0; i < A.rows(); ++i) out.x(i) = gf::sample_nonzero(rng);
  for (Index i = 0; i < A.rows(); ++i) out.y(i) = gf::sample_nonzero(rng);
  out.H = assemble_H(A, B, out.x, out.y);
  return out;
}

}  // namespace dynrank
