#pragma once

// Shared generators for the test binaries.

#include <algorithm>

#include "dynrank/linalg.hpp"

namespace dynrank::testing {

struct ColumnUpdate {
  Index column;
  SparseVector delta;
};

/// Random mixed entry/column updates on an n x n matrix whose rank never
/// exceeds `cap`. Proposals that would exceed the cap become column zeroings.
class BoundedRankWalk {
 public:
  BoundedRankWalk(Index n, Index cap, gf::Rng& rng, Matrix start)
      : n_(n), cap_(cap), rng_(rng), A_(std::move(start)), rank_(rank(A_)) {}
  BoundedRankWalk(Index n, Index cap, gf::Rng& rng) : BoundedRankWalk(n, cap, rng, zeros(n, n)) {}

  const Matrix& matrix() const { return A_; }
  Index rank_now() const { return rank_; }

  ColumnUpdate next() {
    const auto c = static_cast<Index>(rng_.uniform(n_));
    Vector target = A_.col(c);
    switch (rng_.uniform(6)) {
      case 0:
      case 1: {  // single entry
        const auto r = static_cast<Index>(rng_.uniform(n_));
        target(r) = rng_.uniform(4) == 0 ? gf::zero() : gf::sample(rng_);
        break;
      }
      case 2: {  // random combination of existing columns
        target = zero_vector(n_);
        const auto terms = 1 + rng_.uniform(3);
        for (std::uint64_t t = 0; t < terms; ++t) {
          const auto src = static_cast<Index>(rng_.uniform(n_));
          kernel::axpy(target.data(), A_.col(src).data(), gf::sample(rng_), n_);
        }
        break;
      }
      case 3:  // zero the column
        target = zero_vector(n_);
        break;
      default: {  // fresh sparse column
        target = zero_vector(n_);
        const auto z = 1 + rng_.uniform(4);
        for (std::uint64_t t = 0; t < z; ++t) target(static_cast<Index>(rng_.uniform(n_))) = gf::sample_nonzero(rng_);
        break;
      }
    }
    Matrix trial = A_;
    trial.col(c) = target;
    Index r = rank(trial);
    if (r > cap_) {
      target = zero_vector(n_);
      trial.col(c) = target;
      r = rank(trial);
    }
    ColumnUpdate u{c, {}};
    for (Index row = 0; row < n_; ++row) {
      const Fp d = target(row) - A_(row, c);
      if (!d.is_zero()) u.delta.push_back({row, d});
    }
    A_ = std::move(trial);
    rank_ = r;
    return u;
  }

 private:
  Index n_, cap_;
  gf::Rng& rng_;
  Matrix A_;
  Index rank_;
};

inline bool contains(const IndexSet& s, Index x) { return std::find(s.begin(), s.end(), x) != s.end(); }

}  // namespace dynrank::testing
