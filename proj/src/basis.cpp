#include "dynrank/basis.hpp"

#include <algorithm>

namespace dynrank {

DyadicProducts::DyadicProducts(const Matrix& A, Vector v)
    : rows_(A.rows()), cols_(A.cols()), top_(ceil_log2(std::max<Index>(A.cols(), 1))), v_(std::move(v)) {
  if (v_.size() != cols_) throw Error(Errc::dimension_mismatch, "v must have one entry per column");
  const Index N = padded();
  levels_.resize(static_cast<std::size_t>(top_ + 1));
  levels_[0] = zeros(rows_, N);
  for (Index c = 0; c < cols_; ++c) {
    if (v_(c).is_zero()) continue;
    kernel::axpy(levels_[0].col(c).data(), A.col(c).data(), v_(c), rows_);
  }
  for (Index l = 1; l <= top_; ++l) {
    const Matrix& below = levels_[static_cast<std::size_t>(l - 1)];
    Matrix& here = levels_[static_cast<std::size_t>(l)];
    here = zeros(rows_, blocks(l));
    for (Index k = 0; k < blocks(l); ++k) here.col(k) = below.col(2 * k) + below.col(2 * k + 1);
  }
}

void DyadicProducts::column_update(Index i, const SparseVector& u) {
  if (i < 0 || i >= cols_) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  const Fp vi = v_(i);
  if (vi.is_zero()) return;
  for (const auto& e : u) {
    if (e.index < 0 || e.index >= rows_) throw Error(Errc::index_out_of_range, "row " + std::to_string(e.index));
    const Fp add = e.value * vi;
    for (Index l = 0; l <= top_; ++l) levels_[static_cast<std::size_t>(l)](e.index, i >> l) += add;
  }
  gf::count_mul(u.size());
}

bool DyadicProducts::check_ladder() const {
  for (Index l = 0; l < top_; ++l) {
    const Matrix& below = levels_[static_cast<std::size_t>(l)];
    const Matrix& above = levels_[static_cast<std::size_t>(l + 1)];
    for (Index k = 0; k < blocks(l + 1); ++k)
      if (above.col(k) != below.col(2 * k) + below.col(2 * k + 1)) return false;
  }
  return true;
}

// One rank back end: either A itself (plain) or a family of sketches M_c with
// k = 2^j. Rank structures exist only while the level is active.
struct BasisMaintainer::Backend {
  struct Level {
    Index k = 0, r = 0;
    bool sketched = false;
    std::vector<SketchMatrix> M;
    std::vector<DyadicProducts> dp;
    std::vector<DynamicRank> R;
    std::vector<Index> slot_col;  // column of A held by each slot, -1 when free

    Index copies() const { return static_cast<Index>(dp.size()); }
    bool active() const { return !R.empty(); }

    SparseVector proj(Index c, const SparseVector& u) const {
      return sketched ? project(M[static_cast<std::size_t>(c)], u) : u;
    }
    Vector proj(Index c, const Vector& col) const {
      if (!sketched) return col;
      return apply_left(M[static_cast<std::size_t>(c)], col);
    }
    Index slot_of(Index col) const {
      const auto it = std::find(slot_col.begin(), slot_col.end(), col);
      return it == slot_col.end() ? -1 : static_cast<Index>(it - slot_col.begin());
    }
    Index free_slot() const { return slot_of(-1); }
    Index rank() const {
      Index best = 0;
      for (const auto& r : R) best = std::max(best, r.rank());
      return best;
    }
    // True when the rank structures were built now.
    bool activate(const Matrix& A, const std::vector<Index>& basis) {
      if (active() || static_cast<Index>(basis.size()) > r) return false;
      std::fill(slot_col.begin(), slot_col.end(), -1);
      for (std::size_t s = 0; s < basis.size(); ++s) slot_col[s] = basis[s];
      for (Index c = 0; c < copies(); ++c) {
        Matrix B = zeros(r, r);
        for (std::size_t s = 0; s < basis.size(); ++s) B.col(static_cast<Index>(s)) = proj(c, Vector(A.col(basis[s])));
        R.emplace_back(B);
      }
      return true;
    }
  };

  std::vector<Level> levels;
  Index i_min = 0;  // level index offset in low-rank mode

  Level& level_for(Index basis_size, bool low_rank) {
    if (!low_rank) return levels.front();
    const Index i_max = i_min + static_cast<Index>(levels.size()) - 1;
    const Index j = std::clamp(ceil_log2(basis_size + 1), i_min, i_max);
    return levels[static_cast<std::size_t>(j - i_min)];
  }
};

BasisMaintainer::BasisMaintainer(const Matrix& A, gf::Rng& rng, BasisOptions opts)
    : BasisMaintainer(A, greedy_column_basis(A), rng, opts) {}

BasisMaintainer::BasisMaintainer(const Matrix& A, const IndexSet& basis, gf::Rng& rng, BasisOptions opts)
    : A_(A), rng_(rng), opts_(opts), backend_(std::make_unique<Backend>()) {
  detail::check_indices(basis, A.cols(), "column");
  if (dynrank::rank(submatrix(A, detail::complement({}, A.rows()), basis)) != static_cast<Index>(basis.size())) {
    throw Error(Errc::singular_init, "initial basis columns are dependent");
  }
  const Index n = A.cols();
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gf::sample(rng_);
  if (!opts_.low_rank) {
    Backend::Level L;
    L.k = L.r = A.rows();
    L.dp.emplace_back(A_, v);
    L.slot_col.assign(static_cast<std::size_t>(L.r), -1);
    backend_->levels.push_back(std::move(L));
  } else {
    const Index copies = opts_.copies > 0 ? opts_.copies : boost_count(std::max<Index>(n, 2));
    backend_->i_min = ceil_log2(kMinLevelK) + 1;
    const Index i_max = std::max(backend_->i_min, ceil_log2(std::max<Index>(A.rows(), 1)));
    for (Index j = backend_->i_min; j <= i_max; ++j) {
      Backend::Level L;
      L.sketched = true;
      L.k = Index{1} << j;
      L.r = sketch_dimension(A.rows(), L.k);
      gf::Rng level_rng = rng_.split(static_cast<std::uint64_t>(j));
      for (Index c = 0; c < copies; ++c) {
        L.M.push_back(build_sketch(A.rows(), L.k, level_rng));
        L.dp.emplace_back(apply_left(L.M.back(), A_), v);
      }
      L.slot_col.assign(static_cast<std::size_t>(L.r), -1);
      backend_->levels.push_back(std::move(L));
    }
  }
  basis_.assign(basis.begin(), basis.end());
}

BasisMaintainer::~BasisMaintainer() = default;
BasisMaintainer::BasisMaintainer(BasisMaintainer&&) noexcept = default;

IndexSet BasisMaintainer::basis() const {
  IndexSet out(basis_.begin(), basis_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void BasisMaintainer::resample() {
  ++resamples_;
  const Index n = A_.cols();
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gf::sample(rng_);
  for (auto& L : backend_->levels)
    for (Index c = 0; c < L.copies(); ++c) {
      const Matrix P = L.sketched ? apply_left(L.M[static_cast<std::size_t>(c)], A_) : A_;
      L.dp[static_cast<std::size_t>(c)] = DyadicProducts(P, v);
    }
}

std::optional<Index> BasisMaintainer::search(bool& inconsistent) {
  inconsistent = false;
  last_probes_ = 0;
  auto& L = backend_->level_for(rank(), opts_.low_rank);
  L.activate(A_, basis_);
  const Index spare = L.free_slot();
  if (spare < 0) return std::nullopt;
  const Index have = rank();
  const auto before = gf::counters().mul;

  auto probe = [&](Index level, Index block) {
    ++last_probes_;
    Index best = 0;
    for (Index c = 0; c < L.copies(); ++c) {
      auto& R = L.R[static_cast<std::size_t>(c)];
      R.set_column(spare, L.dp[static_cast<std::size_t>(c)].product(level, block));
      best = std::max(best, R.rank());
      R.set_column(spare, zero_vector(L.r));
    }
    return best > have;
  };

  const DyadicProducts& shape = L.dp.front();
  std::optional<Index> found;
  if (probe(shape.top_level(), 0)) {
    Index level = shape.top_level(), block = 0;
    while (level > 0) {
      if (probe(level - 1, 2 * block)) {
        block = 2 * block;
      } else if (probe(level - 1, 2 * block + 1)) {
        block = 2 * block + 1;
      } else {
        inconsistent = true;
        break;
      }
      --level;
    }
    if (!inconsistent && block < n()) found = block;
    if (block >= n()) inconsistent = true;
  }
  probe_mults_ += gf::counters().mul - before;
  return inconsistent ? std::nullopt : found;
}

std::optional<Index> BasisMaintainer::find_independent_column() {
  bool inconsistent = false;
  auto found = search(inconsistent);
  total_probes_ += static_cast<std::uint64_t>(last_probes_);
  if (!inconsistent) return found;
  resample();
  found = search(inconsistent);
  total_probes_ += static_cast<std::uint64_t>(last_probes_);
  if (inconsistent) throw Error(Errc::probabilistic_failure, "basis search inconsistent after resampling v");
  return found;
}

IndexSet BasisMaintainer::column_update(Index i, const SparseVector& u) {
  if (i < 0 || i >= n()) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  SparseVector nz;
  for (const auto& e : u) {
    if (e.index < 0 || e.index >= A_.rows()) throw Error(Errc::index_out_of_range, "row " + std::to_string(e.index));
    if (!e.value.is_zero()) nz.push_back(e);
  }
  if (nz.empty()) return basis();
  for (const auto& e : nz) A_(e.index, i) += e.value;
  for (auto& L : backend_->levels)
    for (Index c = 0; c < L.copies(); ++c) L.dp[static_cast<std::size_t>(c)].column_update(i, L.proj(c, nz));

  auto& here = backend_->level_for(rank(), opts_.low_rank);
  const bool fresh = here.activate(A_, basis_);
  const auto pos = std::find(basis_.begin(), basis_.end(), i);
  if (pos != basis_.end()) {
    for (auto& L : backend_->levels) {
      if (!L.active() || (fresh && &L == &here)) continue;
      const Index slot = L.slot_of(i);
      for (Index c = 0; c < L.copies(); ++c) L.R[static_cast<std::size_t>(c)].column_update(slot, L.proj(c, nz));
    }
    if (here.rank() < rank()) {
      basis_.erase(pos);
      for (auto& L : backend_->levels) {
        if (!L.active()) continue;
        const Index s = L.slot_of(i);
        for (auto& R : L.R) R.set_column(s, zero_vector(L.r));
        L.slot_col[static_cast<std::size_t>(s)] = -1;
      }
    }
  }

  if (auto found = find_independent_column()) {
    basis_.push_back(*found);
    for (auto& L : backend_->levels) {
      if (!L.active()) continue;
      const Index s = L.free_slot();
      if (s < 0) {
        L.R.clear();
        continue;
      }
      L.slot_col[static_cast<std::size_t>(s)] = *found;
      for (Index c = 0; c < L.copies(); ++c)
        L.R[static_cast<std::size_t>(c)].set_column(s, L.proj(c, Vector(A_.col(*found))));
    }
  }

  // Keep the levels next to the current one; drop the rest.
  if (opts_.low_rank) {
    const auto* cur = &backend_->level_for(rank(), true);
    const auto idx = cur - backend_->levels.data();
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(backend_->levels.size()); ++l)
      if (l < idx - 1 || l > idx + 1) backend_->levels[static_cast<std::size_t>(l)].R.clear();
  }
  return basis();
}

IndexSet BasisMaintainer::set_column(Index i, const Vector& column) {
  if (i < 0 || i >= n()) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  if (column.size() != A_.rows()) throw Error(Errc::dimension_mismatch, "column length");
  SparseVector delta;
  for (Index r = 0; r < A_.rows(); ++r) {
    const Fp d = column(r) - A_(r, i);
    if (!d.is_zero()) delta.push_back({r, d});
  }
  return column_update(i, delta);
}

bool BasisMaintainer::check_basis() const {
  const IndexSet B = basis();
  const Matrix cols = submatrix(A_, detail::complement({}, A_.rows()), B);
  return dynrank::rank(cols) == static_cast<Index>(B.size()) && dynrank::rank(A_) == static_cast<Index>(B.size());
}

bool BasisMaintainer::check_products() const {
  for (const auto& L : backend_->levels)
    for (Index c = 0; c < L.copies(); ++c) {
      const DyadicProducts& dp = L.dp[static_cast<std::size_t>(c)];
      if (!dp.check_ladder()) return false;
      const Matrix P = L.sketched ? apply_left(L.M[static_cast<std::size_t>(c)], A_) : A_;
      for (Index k = 0; k < dp.blocks(0); ++k) {
        const Vector expect = k < n() ? Vector(P.col(k) * dp.v()(k)) : zero_vector(P.rows());
        if (dp.product(0, k) != expect) return false;
      }
    }
  return true;
}

}  // namespace dynrank
