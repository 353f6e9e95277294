#include "dynrank/singularity.hpp"

namespace dynrank {

SingularityDetector::SingularityDetector(const Matrix& H) : H_(H) {
  if (H.rows() != H.cols()) throw Error(Errc::not_square, "detector needs a square matrix");
  auto inv = dynrank::inverse(H);
  if (!inv) throw Error(Errc::singular_init, "initial matrix is singular");
  Hinv_ = std::move(*inv);
}

void SingularityDetector::check(const SparseVector& v) const {
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= size()) {
      throw Error(Errc::index_out_of_range, "index " + std::to_string(e.index));
    }
  }
}

Fp SingularityDetector::denominator(const SparseVector& c, const SparseVector& d) const {
  Fp gamma = gf::one();
  for (const auto& dc : d)
    for (const auto& cc : c) gamma += dc.value * Hinv_(dc.index, cc.index) * cc.value;
  return gamma;
}

bool SingularityDetector::would_be_singular(const SparseVector& c, const SparseVector& d) const {
  check(c);
  check(d);
  return denominator(c, d).is_zero();
}

void SingularityDetector::apply(const SparseVector& c, const SparseVector& d, Fp gamma) {
  const Index n = size();
  for (const auto& cc : c)
    for (const auto& dd : d) H_(cc.index, dd.index) += cc.value * dd.value;

  // Hinv <- Hinv - (Hinv c)(d^T Hinv) / gamma
  Vector u = zero_vector(n);
  for (const auto& cc : c) kernel::axpy(u.data(), Hinv_.col(cc.index).data(), cc.value, n);
  Vector w = zero_vector(n);  // w^T = d^T Hinv
  for (const auto& dd : d)
    for (Index l = 0; l < n; ++l) w(l) += dd.value * Hinv_(dd.index, l);
  gf::count_mul(static_cast<std::uint64_t>(n) * d.size());
  const Fp scale = -gf::inv(gamma);
  for (Index l = 0; l < n; ++l) {
    if (!w(l).is_zero()) kernel::axpy(Hinv_.col(l).data(), u.data(), w(l) * scale, n);
  }
}

UpdateOutcome SingularityDetector::try_rank_one(const SparseVector& c, const SparseVector& d) {
  check(c);
  check(d);
  const Fp gamma = denominator(c, d);
  if (gamma.is_zero()) {
    ++rejected_;
    return UpdateOutcome::would_be_singular;
  }
  if (!c.empty() && !d.empty()) apply(c, d, gamma);
  log_.push_back({c, d});
  ++applied_;
  return UpdateOutcome::applied;
}

UpdateOutcome SingularityDetector::try_entry_update(Index i, Index j, Fp delta) {
  if (i < 0 || i >= size() || j < 0 || j >= size()) {
    throw Error(Errc::index_out_of_range, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  if (delta.is_zero()) return try_rank_one({}, {});
  return try_rank_one({{i, delta}}, {{j, gf::one()}});
}

void SingularityDetector::revert() {
  if (log_.empty()) throw Error(Errc::empty_log, "nothing to revert");
  Logged last = std::move(log_.back());
  log_.pop_back();
  if (last.c.empty() || last.d.empty()) return;
  for (auto& e : last.c) e.value = -e.value;
  // The previous matrix was nonsingular, so gamma cannot vanish here.
  apply(last.c, last.d, denominator(last.c, last.d));
  ++applied_;
}

}  // namespace dynrank
