#include "dynrank/submatrix.hpp"

#include <algorithm>

namespace dynrank {

namespace {

Matrix pad(const Matrix& A, Index N) {
  Matrix out = zeros(N, N);
  out.topLeftCorner(A.rows(), A.cols()) = A;
  return out;
}

}  // namespace

SubmatrixMaintainer::SubmatrixMaintainer(const Matrix& A, gf::Rng& rng, SubmatrixOptions opts)
    : SubmatrixMaintainer(A, greedy_row_basis(A),
                          greedy_column_basis(submatrix(A, greedy_row_basis(A), detail::complement({}, A.cols()))),
                          rng, opts) {}

SubmatrixMaintainer::SubmatrixMaintainer(const Matrix& A, const IndexSet& I, const IndexSet& J, gf::Rng& rng,
                                         SubmatrixOptions opts)
    : n_(A.rows()), rng_(rng), opts_(opts), gadget_(std::max<Index>(A.rows(), 1)) {
  if (A.rows() != A.cols()) throw Error(Errc::not_square, "submatrix maintenance needs a square matrix");
  if (I.size() != J.size()) throw Error(Errc::dimension_mismatch, "|I| != |J|");
  detail::check_indices(I, n_, "row");
  detail::check_indices(J, n_, "column");
  if (determinant(submatrix(A, I, J)).is_zero()) throw Error(Errc::singular_init, "A_{I,J} is singular");
  const Index N = gadget_.padded();
  A_ = pad(A, N);
  row_slot_.assign(static_cast<std::size_t>(N), -1);
  col_slot_.assign(static_cast<std::size_t>(N), -1);
  for (std::size_t s = 0; s < I.size(); ++s) {
    row_slot_[static_cast<std::size_t>(I[s])] = static_cast<Index>(s);
    col_slot_[static_cast<std::size_t>(J[s])] = static_cast<Index>(s);
  }
  k_ = static_cast<Index>(I.size());
  rebuild(true);
}

IndexSet SubmatrixMaintainer::rows() const {
  IndexSet out;
  for (Index i = 0; i < n_; ++i)
    if (row_slot_[static_cast<std::size_t>(i)] >= 0) out.push_back(i);
  return out;
}

IndexSet SubmatrixMaintainer::cols() const {
  IndexSet out;
  for (Index j = 0; j < n_; ++j)
    if (col_slot_[static_cast<std::size_t>(j)] >= 0) out.push_back(j);
  return out;
}

void SubmatrixMaintainer::rebuild(bool resample) {
  const Index N = gadget_.padded();
  const IndexSet I = rows(), J = cols();
  std::vector<Label> a, b;
  for (std::size_t s = 0; s < I.size(); ++s) {
    b.push_back(gadget_.tree().leaf(I[s]));
    a.push_back(gadget_.tree().leaf(J[s]));
    row_slot_[static_cast<std::size_t>(I[s])] = static_cast<Index>(s);
    col_slot_[static_cast<std::size_t>(J[s])] = static_cast<Index>(s);
  }
  gadget_ = Gadget::build(N, a, b);
  if (resample || x_.size() != N) {
    x_.resize(N);
    y_.resize(N);
    for (Index i = 0; i < N; ++i) x_(i) = gf::sample_nonzero(rng_);
    for (Index i = 0; i < N; ++i) y_(i) = gf::sample_nonzero(rng_);
  }
  detector_.emplace(assemble_H(A_, gadget_.matrix(), x_, y_));
}

bool SubmatrixMaintainer::try_gadget(const EntryDeltas& deltas) {
  const RankOne step = as_rank_one(deltas, gadget_.padded());
  if (detector_->try_rank_one(step.c, step.d) == UpdateOutcome::would_be_singular) return false;
  gadget_.apply(deltas);
  ++relinks_;
  return true;
}

Index SubmatrixMaintainer::free_u_slot() const {
  std::vector<bool> used(static_cast<std::size_t>(padded()), false);
  for (Index s : col_slot_)
    if (s >= 0) used[static_cast<std::size_t>(s)] = true;
  for (Index s = 0; s < padded(); ++s)
    if (!used[static_cast<std::size_t>(s)]) return s;
  return -1;
}

std::optional<std::pair<Index, Index>> SubmatrixMaintainer::search_once(bool& failed) {
  failed = false;
  last_probes_ = 0;
  const Index p = free_u_slot();
  if (p < 0) return std::nullopt;
  const Index q = gadget_.switch_partners(GadgetSide::a, p).front();
  const GadgetTree& t = gadget_.tree();

  // v_q keeps u_p matched while it gains the T' root, so this never fails.
  if (!try_gadget(gadget_.plan_add_edge(GadgetSide::b, q, GadgetTree::root()))) {
    failed = true;
    return std::nullopt;
  }
  ++last_probes_;
  if (!try_gadget(gadget_.plan_relink(GadgetSide::a, p, GadgetTree::root()))) {
    if (!try_gadget(gadget_.plan_remove_edge(GadgetSide::b, q, GadgetTree::root()))) failed = true;
    return std::nullopt;
  }

  auto descend = [&](GadgetSide side, Index slot) -> Label {
    Label h = GadgetTree::root();
    while (!t.is_leaf(h)) {
      ++last_probes_;
      if (try_gadget(gadget_.plan_relink(side, slot, 2 * h))) {
        h = 2 * h;
      } else if (try_gadget(gadget_.plan_relink(side, slot, 2 * h + 1))) {
        h = 2 * h + 1;
      } else {
        return -1;
      }
    }
    return h;
  };
  const Label hi = descend(GadgetSide::b, q);
  const Label hj = hi < 0 ? -1 : descend(GadgetSide::a, p);
  if (hj < 0) {
    failed = true;
    return std::nullopt;
  }
  // Both switches sit on leaves and H is nonsingular, so A_{I+i', J+j'} is.
  const Index i = t.interval(hi).first, j = t.interval(hj).first;
  row_slot_[static_cast<std::size_t>(i)] = q;
  col_slot_[static_cast<std::size_t>(j)] = p;
  ++k_;
  return std::make_pair(i, j);
}

std::optional<std::pair<Index, Index>> SubmatrixMaintainer::augment_search() {
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    bool failed = false;
    auto found = search_once(failed);
    total_probes_ += static_cast<std::uint64_t>(last_probes_);
    if (!failed && !found && opts_.verify && dynrank::rank(matrix()) > k_) failed = true;
    if (!failed) {
      detector_->clear_log();
      return found;
    }
    ++resamples_;
    rebuild(true);
  }
  throw Error(opts_.verify ? Errc::verify_failure : Errc::probabilistic_failure,
              "search kept failing after " + std::to_string(opts_.max_retries) + " resamples");
}

std::pair<IndexSet, IndexSet> SubmatrixMaintainer::entry_update(Index i, Index j, Fp value) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw Error(Errc::index_out_of_range, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  const Fp delta = value - A_(i, j);
  if (!delta.is_zero()) {
    if (detector_->try_entry_update(i, j, delta) == UpdateOutcome::would_be_singular) {
      // det(A_{I,J}) would vanish, so i in I, j in J and the (i, j) cofactor
      // is nonzero: dropping i and j keeps H nonsingular before and after.
      const Index s = row_slot_[static_cast<std::size_t>(i)], u = col_slot_[static_cast<std::size_t>(j)];
      if (s < 0 || u < 0) throw Error(Errc::probabilistic_failure, "singular update outside A_{I,J}");
      const bool ok = try_gadget(gadget_.plan_pair(GadgetSide::a, u, s)) &&
                      try_gadget(gadget_.plan_remove_edge(GadgetSide::b, s, gadget_.tree().leaf(i)));
      row_slot_[static_cast<std::size_t>(i)] = -1;
      col_slot_[static_cast<std::size_t>(j)] = -1;
      --k_;
      A_(i, j) = value;
      if (!ok || detector_->try_entry_update(i, j, delta) == UpdateOutcome::would_be_singular) {
        ++resamples_;
        rebuild(true);
      }
    } else {
      A_(i, j) = value;
    }
    detector_->clear_log();
  }
  augment_search();
  augment_search();
  if (opts_.verify && (!check_invariants() || dynrank::rank(matrix()) != k_)) {
    throw Error(Errc::verify_failure, "submatrix invariants violated");
  }
  return {rows(), cols()};
}

bool SubmatrixMaintainer::check_invariants() const {
  const IndexSet I = rows(), J = cols();
  if (static_cast<Index>(I.size()) != k_ || static_cast<Index>(J.size()) != k_) return false;
  if (determinant(submatrix(A_, I, J)).is_zero()) return false;
  if (detector_->matrix() != assemble_H(A_, gadget_.matrix(), x_, y_)) return false;
  for (Index s = 0; s < padded(); ++s) {
    const auto labels = gadget_.switch_labels(GadgetSide::a, s);
    const auto partners = gadget_.switch_partners(GadgetSide::a, s);
    if (labels.size() + partners.size() != 1) return false;
    if (labels.size() == 1) {
      const Label h = labels.front();
      if (!gadget_.tree().is_leaf(h) || col_slot_[static_cast<std::size_t>(h - padded())] != s) return false;
    }
    const auto vlabels = gadget_.switch_labels(GadgetSide::b, s);
    if (vlabels.size() + gadget_.switch_partners(GadgetSide::b, s).size() != 1) return false;
    if (vlabels.size() == 1) {
      const Label h = vlabels.front();
      if (!gadget_.tree().is_leaf(h) || row_slot_[static_cast<std::size_t>(h - padded())] != s) return false;
    }
  }
  return gadget_.is_forest();
}

}  // namespace dynrank
