#include "dynrank/stream.hpp"

#include <charconv>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "dynrank/basis.hpp"
#include "dynrank/combi.hpp"
#include "dynrank/matching.hpp"
#include "dynrank/oracle.hpp"
#include "dynrank/rank_reduction.hpp"
#include "dynrank/submatrix.hpp"

namespace dynrank {

namespace {

constexpr std::uint64_t kDefaultPrime = 2147483647;
constexpr std::uint64_t kDefaultSeed = 1;

[[noreturn]] void fail(Errc code, int line, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

template <class T>
T number(const std::string& tok, int line) {
  T v{};
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || end != tok.data() + tok.size()) fail(Errc::parse_error, line, "bad number '" + tok + "'");
  return v;
}

// 1-based text index to 0-based.
Index index(const std::string& tok, Index bound, int line) {
  const auto v = number<std::int64_t>(tok, line);
  if (v < 1) fail(Errc::parse_error, line, "index " + tok + " is not 1-based");
  if (v > bound) fail(Errc::dimension_error, line, "index " + tok + " exceeds " + std::to_string(bound));
  return static_cast<Index>(v - 1);
}

class Parser {
 public:
  UpdateStream parse(std::istream& in) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::vector<std::string> tok;
      for (std::string t; ss >> t;) tok.push_back(t);
      if (!tok.empty()) directive(tok);
    }
    if (!header_) fail(Errc::parse_error, line_, "missing header");
    if (!begun_) fail(Errc::parse_error, line_, "missing 'begin'");
    return s_;
  }

 private:
  void arity(const std::vector<std::string>& tok, std::size_t lo, std::size_t hi) const {
    if (tok.size() < lo || tok.size() > hi) fail(Errc::parse_error, line_, "wrong operand count for '" + tok[0] + "'");
  }

  void directive(const std::vector<std::string>& tok) {
    const std::string& op = tok[0];
    if (!header_) return header(tok);
    if (op == "prime" || op == "seed") {
      if (begun_) fail(Errc::parse_error, line_, "'" + op + "' after 'begin'");
      arity(tok, 2, 2);
      (op == "prime" ? s_.prime : s_.seed) = number<std::uint64_t>(tok[1], line_);
      return;
    }
    if (op == "begin") {
      if (begun_) fail(Errc::parse_error, line_, "second 'begin'");
      arity(tok, 1, 1);
      begun_ = true;
      return;
    }
    StreamOp o = operation(tok);
    o.line = line_;
    (begun_ ? s_.updates : s_.setup).push_back(std::move(o));
  }

  void header(const std::vector<std::string>& tok) {
    const std::string& op = tok[0];
    auto size = [&](std::size_t k) {
      const auto v = number<std::int64_t>(tok[k], line_);
      if (v < 1) fail(Errc::dimension_error, line_, "size must be positive");
      return static_cast<Index>(v);
    };
    if (op == "matrix" || op == "graph") {
      arity(tok, 2, 2);
      s_.kind = op == "matrix" ? StreamKind::matrix : StreamKind::graph;
      s_.n = size(1);
    } else if (op == "bipartite") {
      arity(tok, 3, 3);
      s_.kind = StreamKind::bipartite;
      s_.left = size(1);
      s_.right = size(2);
      s_.n = s_.left + s_.right;
    } else if (op == "weighted") {
      arity(tok, 4, 4);
      s_.kind = StreamKind::weighted;
      s_.left = size(1);
      s_.right = size(2);
      s_.max_weight = size(3);
      s_.n = s_.left + s_.right;
    } else {
      fail(Errc::parse_error, line_, "expected a header, got '" + op + "'");
    }
    header_ = true;
  }

  StreamOp operation(const std::vector<std::string>& tok) {
    const std::string& op = tok[0];
    StreamOp o{};
    const bool matrix = s_.kind == StreamKind::matrix;
    const bool sided = s_.kind == StreamKind::bipartite || s_.kind == StreamKind::weighted;
    const Index lbound = sided ? s_.left : s_.n, rbound = sided ? s_.right : s_.n;
    const bool weighted = s_.kind == StreamKind::weighted;

    if (matrix && (op == (begun_ ? "entry" : "set"))) {
      arity(tok, 4, 4);
      o.type = StreamOp::Type::entry;
      o.a = index(tok[1], s_.n, line_);
      o.b = index(tok[2], s_.n, line_);
      o.value = number<std::int64_t>(tok[3], line_);
    } else if (matrix && begun_ && op == "col") {
      if (tok.size() < 3) fail(Errc::parse_error, line_, "'col' needs j and z");
      o.type = StreamOp::Type::column;
      o.a = index(tok[1], s_.n, line_);
      const auto z = number<std::int64_t>(tok[2], line_);
      if (z < 0 || tok.size() != 3 + 2 * static_cast<std::size_t>(z))
        fail(Errc::parse_error, line_, "'col' expects " + tok[2] + " index/value pairs");
      for (std::size_t t = 3; t < tok.size(); t += 2)
        o.column.emplace_back(index(tok[t], s_.n, line_), number<std::int64_t>(tok[t + 1], line_));
    } else if (!matrix && op == "+") {
      arity(tok, 3, weighted ? 4 : 3);
      o.type = StreamOp::Type::insert;
      o.a = index(tok[1], lbound, line_);
      o.b = index(tok[2], rbound, line_);
      o.value = tok.size() == 4 ? number<std::int64_t>(tok[3], line_) : 1;
    } else if (!matrix && begun_ && op == "-") {
      arity(tok, 3, 3);
      o.type = StreamOp::Type::erase;
      o.a = index(tok[1], lbound, line_);
      o.b = index(tok[2], rbound, line_);
    } else if (weighted && begun_ && op == "w") {
      arity(tok, 4, 4);
      o.type = StreamOp::Type::weight;
      o.a = index(tok[1], lbound, line_);
      o.b = index(tok[2], rbound, line_);
      o.value = number<std::int64_t>(tok[3], line_);
    } else {
      fail(Errc::parse_error, line_, "unexpected '" + op + "'" + (begun_ ? "" : " before 'begin'"));
    }
    return o;
  }

  UpdateStream s_;
  int line_ = 0;
  bool header_ = false, begun_ = false;
};

std::string join(const IndexSet& idx) {
  std::string out;
  for (std::size_t s = 0; s < idx.size(); ++s) out += (s ? "," : "") + std::to_string(idx[s] + 1);
  return out;
}

[[noreturn]] void diverged(const StreamOp& op, const std::string& what) {
  throw Error(Errc::verify_failure, "line " + std::to_string(op.line) + ": " + what);
}

// Target column after a `col` line; later pairs for the same row win.
SparseVector column_delta(const Matrix& A, const StreamOp& op) {
  std::map<Index, Fp> target;
  for (const auto& [r, v] : op.column) target[r] = Fp(v);
  SparseVector delta;
  for (const auto& [r, v] : target)
    if (const Fp d = v - A(r, op.a); !d.is_zero()) delta.push_back({r, d});
  return delta;
}

struct Context {
  const UpdateStream& s;
  const RunOptions& o;
  gf::Rng rng;
  RunResult out;
  std::map<std::string, std::uint64_t> counters;
};

void run_matrix(Context& c) {
  Matrix A0 = zeros(c.s.n, c.s.n);
  for (const auto& op : c.s.setup) A0(op.a, op.b) = Fp(op.value);
  const std::string& mode = c.o.mode;

  if (mode == "rank") {
    UnboundedRank R(A0, c.rng, {c.o.copies, c.o.worst_case_spread});
    for (const auto& op : c.s.updates) {
      const Index r = op.type == StreamOp::Type::entry ? R.entry_update(op.a, op.b, Fp(op.value))
                                                       : R.update(op.a, column_delta(R.matrix(), op));
      if (c.o.verify && r != rank(R.matrix())) diverged(op, "rank " + std::to_string(r) + " but oracle disagrees");
      c.out.lines.push_back("rank=" + std::to_string(r));
    }
    c.counters["activations"] = R.activations();
  } else if (mode == "basis") {
    BasisMaintainer B(A0, c.rng, {c.o.low_rank, c.o.copies});
    for (const auto& op : c.s.updates) {
      const IndexSet basis =
          op.type == StreamOp::Type::entry
              ? B.column_update(op.b, SparseVector{{op.a, Fp(op.value) - B.matrix()(op.a, op.b)}})
              : B.column_update(op.a, column_delta(B.matrix(), op));
      if (c.o.verify && !B.check_basis()) diverged(op, "not a column basis: " + join(basis));
      c.out.lines.push_back("basis=" + join(basis));
    }
    c.counters["probes"] = B.total_probes();
    c.counters["resamples"] = B.resamples();
  } else {
    SubmatrixMaintainer S(A0, c.rng, {.verify = c.o.verify});
    for (const auto& op : c.s.updates) {
      if (op.type == StreamOp::Type::entry) {
        S.entry_update(op.a, op.b, Fp(op.value));
      } else {
        for (const auto& [r, v] : op.column) S.entry_update(r, op.a, Fp(v));
      }
      const IndexSet I = S.rows(), J = S.cols();
      if (c.o.verify) {
        const Matrix A = S.matrix();
        if (static_cast<Index>(I.size()) != rank(A) || determinant(submatrix(A, I, J)).is_zero())
          diverged(op, "rows/cols do not index a maximum nonsingular submatrix");
      }
      c.out.lines.push_back("rows=" + join(I) + " cols=" + join(J));
    }
    c.counters["probes"] = S.total_probes();
    c.counters["relinks"] = S.relinks();
    c.counters["resamples"] = S.resamples();
    if (c.o.dump_gadget) c.out.gadget_dot = S.gadget().to_dot();
  }
}

// Edge bookkeeping shared by the graph modes; vertices are global 0-based.
struct EdgeTracker {
  std::map<std::pair<Index, Index>, std::int64_t> edges;

  oracle::EdgeList list() const {
    oracle::EdgeList out;
    for (const auto& [e, w] : edges) out.push_back(e);
    return out;
  }
  std::vector<oracle::WeightedEdge> weighted() const {
    std::vector<oracle::WeightedEdge> out;
    for (const auto& [e, w] : edges) out.push_back({e.first, e.second, w});
    return out;
  }
  void apply(Index u, Index v, std::int64_t w) {
    if (w == 0) edges.erase({u, v}); else edges[{u, v}] = w;
  }
};

void run_graph(Context& c) {
  const std::string& mode = c.o.mode;
  const UnboundedRankOptions ropts{c.o.copies, c.o.worst_case_spread};
  EdgeTracker track;
  const bool sided = c.s.kind != StreamKind::graph;
  // Global vertex ids for the oracle; right side follows the left.
  auto gu = [&](const StreamOp& op) { return op.a; };
  auto gv = [&](const StreamOp& op) { return sided ? c.s.left + op.b : op.b; };
  auto weight_of = [](const StreamOp& op) { return op.type == StreamOp::Type::erase ? std::int64_t{0} : op.value; };

  std::function<std::string(const StreamOp&)> step;
  std::function<void()> finish = [] {};
  std::optional<GeneralMatching> general;
  std::optional<BipartiteMatching> bip;
  std::optional<WeightedMatching> weighted;
  std::optional<MatchedVertexSet> vset;
  std::optional<CombiMatcher> combi;

  auto check = [&](const StreamOp& op, std::int64_t got, std::int64_t want) {
    if (c.o.verify && got != want)
      diverged(op, "reported " + std::to_string(got) + ", oracle " + std::to_string(want));
  };

  if (mode == "match-general") {
    general.emplace(c.s.n, c.rng, ropts);
    step = [&](const StreamOp& op) {
      const Index m = general->update(op.a, op.b, op.type == StreamOp::Type::insert);
      if (c.o.verify && !general->skew_symmetric()) diverged(op, "Tutte matrix lost skew symmetry");
      check(op, m, oracle::matching_size(c.s.n, track.list()));
      return "match=" + std::to_string(m);
    };
    finish = [&] { c.counters["activations"] = general->rank_structure().activations(); };
  } else if (mode == "vset") {
    vset.emplace(c.s.n, c.rng, SubmatrixOptions{.verify = c.o.verify});
    step = [&](const StreamOp& op) {
      const IndexSet I = vset->update(op.a, op.b, op.type == StreamOp::Type::insert);
      if (c.o.verify) {
        const auto edges = track.list();
        check(op, static_cast<std::int64_t>(I.size()), 2 * oracle::matching_size(c.s.n, edges));
        if (!oracle::has_perfect_matching(c.s.n, edges, I)) diverged(op, "G[I] has no perfect matching");
      }
      return "vset=" + join(I);
    };
    finish = [&] {
      c.counters["probes"] = vset->maintainer().total_probes();
      c.counters["relinks"] = vset->maintainer().relinks();
      c.counters["rerandomizations"] = vset->rerandomizations();
    };
  } else if (mode == "match-bipartite") {
    bip.emplace(c.s.left, c.s.right, c.rng, ropts);
    step = [&](const StreamOp& op) {
      const Index m = bip->update(op.a, op.b, op.type == StreamOp::Type::insert);
      check(op, m, oracle::matching_size(c.s.n, track.list()));
      return "match=" + std::to_string(m);
    };
  } else if (mode == "match-weighted") {
    weighted.emplace(c.s.left, c.s.right, c.s.max_weight, c.rng, ropts);
    step = [&](const StreamOp& op) {
      const std::int64_t w = weighted->update(op.a, op.b, weight_of(op));
      check(op, w, oracle::max_weight_matching(c.s.n, track.weighted()));
      return "weight=" + std::to_string(w);
    };
  } else {
    combi.emplace(c.s.left, c.s.right);
    std::uint64_t steps = 0;
    step = [&, steps](const StreamOp& op) mutable {
      const MatchingEdges M = op.type == StreamOp::Type::insert ? combi->insert(gu(op), gv(op)) : combi->erase(gu(op), gv(op));
      steps += combi->last_steps();
      c.counters["steps"] = steps;
      check(op, static_cast<std::int64_t>(M.size()), oracle::matching_size(c.s.n, track.list()));
      std::string line = "edges=";
      for (std::size_t k = 0; k < M.size(); ++k)
        line += (k ? "," : "") + std::to_string(M[k].first + 1) + "-" + std::to_string(M[k].second - c.s.left + 1);
      return line;
    };
  }

  auto apply = [&](const StreamOp& op) {
    track.apply(gu(op), gv(op), weight_of(op));
    return step(op);
  };
  for (const auto& op : c.s.setup) apply(op);
  for (const auto& op : c.s.updates) c.out.lines.push_back(apply(op));
  finish();
}

}  // namespace

UpdateStream parse_stream(std::istream& in) { return Parser().parse(in); }

UpdateStream parse_stream(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

const std::vector<std::string>& stream_modes() {
  static const std::vector<std::string> modes{"rank",           "basis", "submatrix", "match-general", "match-bipartite",
                                              "match-weighted", "vset",  "combi"};
  return modes;
}

RunResult run_stream(const UpdateStream& stream, const RunOptions& opts) {
  static const std::map<std::string, StreamKind> kind_of{
      {"rank", StreamKind::matrix},          {"basis", StreamKind::matrix},
      {"submatrix", StreamKind::matrix},     {"match-general", StreamKind::graph},
      {"vset", StreamKind::graph},           {"match-bipartite", StreamKind::bipartite},
      {"combi", StreamKind::bipartite},      {"match-weighted", StreamKind::weighted}};
  const auto it = kind_of.find(opts.mode);
  if (it == kind_of.end()) throw Error(Errc::mode_mismatch, "unknown mode '" + opts.mode + "'");
  if (it->second != stream.kind) throw Error(Errc::mode_mismatch, "mode '" + opts.mode + "' does not fit this stream");

  gf::PrimeScope scope(opts.prime.value_or(stream.prime.value_or(kDefaultPrime)));
  Context c{stream, opts, gf::Rng(opts.seed.value_or(stream.seed.value_or(kDefaultSeed))), {}, {}};
  const std::uint64_t mults = gf::counters().mul;
  if (stream.kind == StreamKind::matrix) run_matrix(c); else run_graph(c);
  c.counters["updates"] = stream.updates.size();
  c.counters["field_mults"] = gf::counters().mul - mults;
  c.out.counters.assign(c.counters.begin(), c.counters.end());
  return std::move(c.out);
}

}  // namespace dynrank
