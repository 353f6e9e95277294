#include <gtest/gtest.h>

#include "dynrank/stream.hpp"

using namespace dynrank;

namespace {

Errc code_of(const std::string& text) {
  try {
    parse_stream(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::verify_failure;  // no error
}

RunOptions mode(const std::string& m) {
  RunOptions o;
  o.mode = m;
  return o;
}

}  // namespace

TEST(Stream, ParseExamples) {
  const UpdateStream s = parse_stream("matrix 3\nbegin\nentry 1 1 5\n");
  EXPECT_EQ(s.kind, StreamKind::matrix);
  EXPECT_EQ(s.n, 3);
  ASSERT_EQ(s.updates.size(), 1u);
  EXPECT_EQ(s.updates[0].type, StreamOp::Type::entry);
  EXPECT_EQ(s.updates[0].a, 0);
  EXPECT_EQ(s.updates[0].value, 5);

  const UpdateStream b = parse_stream("bipartite 2 2\nbegin\n+ 1 1\n- 1 1\n");
  ASSERT_EQ(b.updates.size(), 2u);
  EXPECT_EQ(b.updates[0].type, StreamOp::Type::insert);
  EXPECT_EQ(b.updates[1].type, StreamOp::Type::erase);

  const UpdateStream h = parse_stream("# c\nweighted 2 3 4\nprime 101\nseed 9\n+ 1 3 2\nbegin\nw 2 1 4 # tail\n");
  EXPECT_EQ(h.prime, 101u);
  EXPECT_EQ(h.seed, 9u);
  EXPECT_EQ(h.max_weight, 4);
  ASSERT_EQ(h.setup.size(), 1u);
  EXPECT_EQ(h.setup[0].b, 2);
  EXPECT_EQ(h.updates[0].value, 4);

  const UpdateStream c = parse_stream("matrix 4\nbegin\ncol 2 2 1 7 4 -1\n");
  EXPECT_EQ(c.updates[0].column.size(), 2u);
  EXPECT_EQ(c.updates[0].column[1], std::make_pair(Index{3}, std::int64_t{-1}));
}

TEST(Stream, ParseErrors) {
  EXPECT_EQ(code_of("matrix 3\nbegin\nentry 0 1 5\n"), Errc::parse_error);
  EXPECT_EQ(code_of("matrix 3\nbegin\nentry 4 1 5\n"), Errc::dimension_error);
  EXPECT_EQ(code_of("matrix 3\nentry 1 1 5\n"), Errc::parse_error);
  EXPECT_EQ(code_of("matrix 3\nbegin\n+ 1 2\n"), Errc::parse_error);
  EXPECT_EQ(code_of("graph 3\nbegin\n+ 1 x\n"), Errc::parse_error);
  EXPECT_EQ(code_of("matrix 3\nbegin\ncol 1 2 1 5\n"), Errc::parse_error);
  EXPECT_EQ(code_of("bipartite 2 3\nbegin\n+ 3 1\n"), Errc::dimension_error);
  EXPECT_EQ(code_of("begin\n"), Errc::parse_error);
  EXPECT_EQ(code_of("graph 3\n"), Errc::parse_error);
  try {
    parse_stream("graph 3\nbegin\n\n+ 1 2 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Stream, RunIdentityRank) {
  const auto s = parse_stream("matrix 3\nset 1 1 1\nset 2 2 1\nset 3 3 1\nbegin\nentry 1 2 0\nentry 3 3 0\n");
  const auto r = run_stream(s, mode("rank"));
  EXPECT_EQ(r.lines, (std::vector<std::string>{"rank=3", "rank=2"}));
}

TEST(Stream, ModeMismatch) {
  const auto s = parse_stream("graph 3\nbegin\n+ 1 2\n");
  try {
    run_stream(s, mode("combi"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::mode_mismatch);
  }
  EXPECT_THROW(run_stream(s, mode("nope")), Error);
}

TEST(Stream, DeterministicAcrossRuns) {
  std::string text = "graph 12\nseed 5\nbegin\n";
  gf::Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const auto u = 1 + rng.uniform(12), v = 1 + (u % 12);
    text += "+ " + std::to_string(u) + " " + std::to_string(v) + "\n- " + std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  const auto s = parse_stream(text);
  for (const char* m : {"match-general", "vset"}) {
    RunOptions o = mode(m);
    o.verify = true;
    EXPECT_EQ(run_stream(s, o).lines, run_stream(s, o).lines) << m;
  }
}

TEST(Stream, SpreadModeSameOutput) {
  std::string text = "matrix 40\nbegin\n";
  gf::Rng rng(4);
  for (int t = 0; t < 150; ++t) {
    const auto i = 1 + rng.uniform(40), j = 1 + rng.uniform(20);
    text += "entry " + std::to_string(i) + " " + std::to_string(j) + " " + std::to_string(rng.uniform(3)) + "\n";
  }
  const auto s = parse_stream(text);
  RunOptions spread = mode("rank");
  spread.worst_case_spread = true;
  spread.verify = true;
  EXPECT_EQ(run_stream(s, mode("rank")).lines, run_stream(s, spread).lines);
}
