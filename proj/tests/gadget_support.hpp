#pragma once

// Exhaustive minor enumeration for gadget matrices.

#include <algorithm>
#include <bit>
#include <set>
#include <utility>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank::testing {

inline IndexSet members(unsigned mask, Index n) {
  IndexSet out;
  for (Index i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

inline unsigned mask_without(Index n, const std::vector<Index>& keep) {
  unsigned m = (1u << n) - 1;
  for (Index i : keep) m &= ~(1u << i);
  return m;
}

// All (T, S) with det(B_{-T,-S}) != 0, as (row mask, column mask) over the leaves.
inline std::set<std::pair<unsigned, unsigned>> nonzero_minors(const Matrix& B, Index n) {
  std::set<std::pair<unsigned, unsigned>> out;
  for (unsigned t = 0; t < (1u << n); ++t)
    for (unsigned s = 0; s < (1u << n); ++s) {
      if (std::popcount(t) != std::popcount(s)) continue;
      if (!determinant(deleted(B, members(t, n), members(s, n))).is_zero()) out.insert({t, s});
    }
  return out;
}

// The characterization for assignments ({i_1}, ..., {i_{k-1}}, I), likewise on the other side.
inline std::set<std::pair<unsigned, unsigned>> predicted_minors(Index n, const std::vector<Index>& is, std::pair<Index, Index> I,
                                                      const std::vector<Index>& js, std::pair<Index, Index> J) {
  std::set<std::pair<unsigned, unsigned>> out;
  auto distinct = [](std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  for (Index ip = I.first; ip <= I.second; ++ip)
    for (Index jp = J.first; jp <= J.second; ++jp) {
      auto a = is, b = js;
      a.push_back(ip);
      b.push_back(jp);
      if (!distinct(a) || !distinct(b)) continue;
      out.insert({mask_without(n, a), mask_without(n, b)});
    }
  return out;
}


}  // namespace dynrank::testing
