#pragma once

// Update streams and a driver that runs them through any maintainer.
//
//   matrix n | bipartite nL nR | graph n | weighted nL nR Wmax
//   [prime p] [seed s]
//   set i j val | + u v [w]        (initial state)
//   begin
//   entry i j val | col j z i1 v1 .. iz vz | + u v [w] | - u v | w u v weight
//
// '#' starts a comment. Indices are 1-based in the text and 0-based here;
// values are absolute assignments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynrank/linalg.hpp"

namespace dynrank {

enum class StreamKind { matrix, bipartite, graph, weighted };

struct StreamOp {
  enum class Type { entry, column, insert, erase, weight };
  Type type;
  Index a = 0, b = 0;        // entry (row, col); edge (u, v); column j in a
  std::int64_t value = 0;    // entry value or edge weight
  std::vector<std::pair<Index, std::int64_t>> column;  // (row, value) pairs
  int line = 0;
};

struct UpdateStream {
  StreamKind kind = StreamKind::matrix;
  Index n = 0;            // matrix size or vertex count
  Index left = 0, right = 0;
  Index max_weight = 0;
  std::optional<std::uint64_t> prime, seed;
  std::vector<StreamOp> setup;
  std::vector<StreamOp> updates;
};

/// Throws parse_error (with line number) or dimension_error.
UpdateStream parse_stream(std::istream& in);
UpdateStream parse_stream(const std::string& text);

struct RunOptions {
  std::string mode;
  std::optional<std::uint64_t> prime, seed;
  Index copies = 0;
  bool verify = false;
  bool worst_case_spread = false;
  bool low_rank = false;  // basis mode
  bool dump_gadget = false;
};

struct RunResult {
  std::vector<std::string> lines;
  std::vector<std::pair<std::string, std::uint64_t>> counters;
  std::string gadget_dot;
};

/// One output line per update. Throws mode_mismatch, verify_failure and
/// whatever the maintainers throw.
RunResult run_stream(const UpdateStream& stream, const RunOptions& opts);

const std::vector<std::string>& stream_modes();

}  // namespace dynrank
