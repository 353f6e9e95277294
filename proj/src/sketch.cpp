#include "dynrank/sketch.hpp"

#include <cassert>
#include <numeric>

namespace dynrank {

Index ceil_log2(Index n) {
  Index l = 0;
  while ((Index{1} << l) < n) ++l;
  return l;
}

Index sketch_dimension(Index n, Index k) {
  return std::max<Index>(2, std::min(kSketchFactor * k, n));
}

Index boost_count(Index n) { return ceil_log2(std::max<Index>(n, 1)) + 2; }

Matrix SketchMatrix::dense() const {
  Matrix out = zeros(n, r);
  for (Index i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s)
      out(i, cols[static_cast<std::size_t>(i)][s]) = vals[static_cast<std::size_t>(i)][s];
  return out;
}

std::vector<Index> SketchMatrix::column_counts() const {
  std::vector<Index> counts(static_cast<std::size_t>(r), 0);
  for (const auto& c : cols) {
    ++counts[static_cast<std::size_t>(c[0])];
    ++counts[static_cast<std::size_t>(c[1])];
  }
  return counts;
}

SketchMatrix build_sketch(Index n, Index k, gf::Rng& rng) {
  if (k < 1) throw Error(Errc::k_too_small, "sketch needs k >= 1");
  SketchMatrix M;
  M.n = n;
  M.r = sketch_dimension(n, k);
  const Index r = M.r;
  const Index cap = M.column_cap();
  M.cols.resize(static_cast<std::size_t>(n));
  M.vals.resize(static_cast<std::size_t>(n));

  // First position: a random permutation folded mod r, so every column gets
  // at most ceil(n/r) first hits.
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.uniform(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> count(static_cast<std::size_t>(r), 0);
  for (Index i = 0; i < n; ++i) {
    const Index c = perm[static_cast<std::size_t>(i)] % r;
    M.cols[static_cast<std::size_t>(i)][0] = c;
    ++count[static_cast<std::size_t>(c)];
  }

  // Second position: uniform over the other columns, redrawn while the
  // column is full.
  constexpr int kTries = 64;
  for (Index i = 0; i < n; ++i) {
    auto& row = M.cols[static_cast<std::size_t>(i)];
    Index pick = -1;
    for (int t = 0; t < kTries && pick < 0; ++t) {
      auto c = static_cast<Index>(rng.uniform(static_cast<std::uint64_t>(r - 1)));
      if (c >= row[0]) ++c;
      if (count[static_cast<std::size_t>(c)] < cap) pick = c;
    }
    if (pick < 0) {
      for (Index c = 0; c < r && pick < 0; ++c)
        if (c != row[0] && count[static_cast<std::size_t>(c)] < cap) pick = c;
    }
    if (pick < 0) {
      // Only our own first column has room. Give it to an earlier row and
      // take that row's second column.
      const Index spare = row[0];
      for (Index h = 0; h < i && pick < 0; ++h) {
        auto& other = M.cols[static_cast<std::size_t>(h)];
        if (other[0] != spare && other[1] != spare && other[1] != row[0]) {
          pick = other[1];
          other[1] = spare;
          ++count[static_cast<std::size_t>(spare)];
          --count[static_cast<std::size_t>(pick)];
        }
      }
    }
    assert(pick >= 0);
    row[1] = pick;
    ++count[static_cast<std::size_t>(pick)];
  }

  for (Index i = 0; i < n; ++i) {
    M.vals[static_cast<std::size_t>(i)] = {gf::sample_nonzero(rng), gf::sample_nonzero(rng)};
  }
  return M;
}

SparseVector project(const SketchMatrix& M, const SparseVector& v) {
  SparseVector out;
  out.reserve(2 * v.size());
  auto add = [&out](Index c, Fp x) {
    for (auto& e : out) {
      if (e.index == c) {
        e.value += x;
        return;
      }
    }
    out.push_back({c, x});
  };
  for (const auto& e : v) {
    if (e.index < 0 || e.index >= M.n) throw Error(Errc::index_out_of_range, "sketch row");
    if (e.value.is_zero()) continue;
    const auto& c = M.cols[static_cast<std::size_t>(e.index)];
    const auto& w = M.vals[static_cast<std::size_t>(e.index)];
    add(c[0], w[0] * e.value);
    add(c[1], w[1] * e.value);
  }
  std::erase_if(out, [](const SparseEntry& e) { return e.value.is_zero(); });
  return out;
}

std::vector<ColumnDelta> propagate_column_update(const SketchMatrix& M, const SketchMatrix& N,
                                                 Index i, const SparseVector& v) {
  if (i < 0 || i >= N.n) throw Error(Errc::index_out_of_range, "column " + std::to_string(i));
  std::vector<ColumnDelta> out;
  const SparseVector u = project(M, v);
  if (u.empty()) return out;
  const auto& c = N.cols[static_cast<std::size_t>(i)];
  const auto& w = N.vals[static_cast<std::size_t>(i)];
  for (int s = 0; s < 2; ++s) {
    ColumnDelta d{c[s], u};
    for (auto& e : d.delta) e.value *= w[s];
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace dynrank
