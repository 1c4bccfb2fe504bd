#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "tileproof/cfg/cfg.hpp"
#include "tileproof/exec/interp.hpp"
#include "tileproof/frontend/parser.hpp"

using namespace tileproof;
using namespace tileproof::cfg;

namespace {

const char* kAllPrograms[] = {"arrayupdate", "copy",     "copy-u",   "copydecoy", "cpynrev",
                              "evenodd",     "find",     "init",     "init-u",    "largest",
                              "period4",     "revrefill", "seqinit", "skipped-u", "smallest"};

std::vector<std::string> labels(const std::vector<Segment>& segs) {
  std::vector<std::string> out;
  for (const auto& s : segs) out.push_back(s.label);
  std::sort(out.begin(), out.end());
  return out;
}

// Three nested loops, wired by hand:
//   S -> 1; 1 tt 2; 2 tt 3; 3 tt 4; 3 ff 6; 4 -> 5; 6 tt 5; 5 -> 3;
//   6 ff 2; 7 -> 1; 2 ff 7; 1 ff E
struct Nested {
  Cfg g;
  int S, n1, n2, n3, n4, n5, n6, n7, E;
  Nested() {
    auto e = frontend::parse_expr;
    S = g.add_node(NodeKind::Start);
    n1 = g.add_node(NodeKind::LoopHead, "k", e("N"));
    n2 = g.add_node(NodeKind::LoopHead, "i", e("N"));
    n3 = g.add_node(NodeKind::LoopHead, "j", e("N"));
    n4 = g.add_node(NodeKind::Assign, "x", e("1"));
    n5 = g.add_node(NodeKind::Assign, "y", e("2"));
    n6 = g.add_node(NodeKind::Cond, "", e("x > 0"));
    n7 = g.add_node(NodeKind::Assign, "z", e("3"));
    E = g.add_node(NodeKind::End);
    g.add_edge(S, n1);
    g.add_edge(n1, n2, EdgeLabel::True);
    g.add_edge(n2, n3, EdgeLabel::True);
    g.add_edge(n3, n4, EdgeLabel::True);
    g.add_edge(n3, n6, EdgeLabel::False);
    g.add_edge(n4, n5);
    g.add_edge(n6, n5, EdgeLabel::True);
    g.add_edge(n5, n3);
    g.add_edge(n6, n2, EdgeLabel::False);
    g.add_edge(n7, n1);
    g.add_edge(n2, n7, EdgeLabel::False);
    g.add_edge(n1, E, EdgeLabel::False);
    g.finalize();
  }
};

void check_structure(const Cfg& g, const std::string& name) {
  auto segs = segments(g);
  std::set<int> covered;
  for (const auto& s : segs) {
    covered.insert(s.nodes.begin(), s.nodes.end());
    for (int n : s.nodes) {
      if (n != s.source && n != s.sink) {
        EXPECT_FALSE(g.is_cutpoint(n)) << name << " " << s.label;
      }
    }
    EXPECT_EQ(s.ell.empty(), s.loop < 0) << name << " " << s.label;
    for (int e : s.edges) EXPECT_FALSE(g.edges()[e].back) << name;
  }
  EXPECT_EQ(covered.size(), g.nodes().size()) << name;

  // Without back-edges every node must get a rank, and edges go forward.
  for (const auto& e : g.edges()) {
    if (!e.back) {
      EXPECT_LT(g.topo_rank(e.src), g.topo_rank(e.dst)) << name;
    }
  }
}

}  // namespace

TEST(Cfg, StraightLineProgramHasOneSegment) {
  auto p = frontend::parse("program s;\nparam N;\nint x;\nint a[N];\nx = 1;\na[0] = x;\nensures true;\n");
  Cfg g = build_cfg(p);
  EXPECT_TRUE(g.cutpoints().empty());
  auto segs = segments(g);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].source, g.start());
  EXPECT_EQ(segs[0].target, g.end());
  EXPECT_TRUE(segs[0].ell.empty());
  EXPECT_EQ(segs[0].label, "S->E");
}

TEST(Cfg, SingleLoopHasOneCutpoint) {
  Cfg g = build_cfg(support::load("copy"));
  ASSERT_EQ(g.cutpoints().size(), 1u);
  ASSERT_EQ(g.loops().size(), 1u);
  EXPECT_EQ(g.loops()[0].counter, "i");
  EXPECT_EQ(g.cut_label(g.cutpoints()[0]), "h1");
  EXPECT_EQ(labels(segments(g)), (std::vector<std::string>{"S->h1", "h1->E", "h1->h1"}));
  for (const auto& s : segments(g))
    if (s.label == "h1->h1") {
      EXPECT_TRUE(s.closes_loop);
      EXPECT_EQ(s.ell, "i");
      EXPECT_EQ(s.file_label(), "h1-h1");
    }
}

TEST(Cfg, TwoSequentialLoopsGiveFiveSegments) {
  Cfg g = build_cfg(support::load("copydecoy"));
  EXPECT_EQ(g.cutpoints().size(), 2u);
  EXPECT_EQ(labels(segments(g)),
            (std::vector<std::string>{"S->h1", "h1->h1", "h1->h2", "h2->E", "h2->h2"}));
}

TEST(Cfg, HandBuiltNestedGraph) {
  Nested f;
  const Cfg& g = f.g;
  EXPECT_EQ(g.cutpoints(), (std::vector<int>{f.n1, f.n2, f.n3}));

  std::set<std::pair<int, int>> back;
  for (const auto& e : g.edges())
    if (e.back) back.insert({e.src, e.dst});
  EXPECT_EQ(back, (std::set<std::pair<int, int>>{{f.n5, f.n3}, {f.n6, f.n2}, {f.n7, f.n1}}));

  ASSERT_EQ(g.loops().size(), 3u);
  EXPECT_EQ(g.loops()[2].parent, 1);
  EXPECT_EQ(g.loops()[1].parent, 0);

  auto segs = segments(g);
  std::map<std::string, Segment> by;
  for (const auto& s : segs) by[s.label] = s;
  EXPECT_EQ(labels(segs), (std::vector<std::string>{"S->h1", "h1->E", "h1->h2", "h2->h1",
                                                    "h2->h3", "h3->h3"}));
  const Segment& inner = by.at("h3->h3");
  EXPECT_EQ(inner.nodes, (std::set<int>{f.n3, f.n4, f.n5, f.n6}));
  EXPECT_EQ(inner.sink, f.n5);
  EXPECT_EQ(inner.ell, "j");
  EXPECT_EQ(inner.outer_vars, (std::vector<std::string>{"k", "i"}));
  EXPECT_EQ(by.at("h2->h1").sink, f.n7);
  EXPECT_TRUE(by.at("S->h1").ell.empty());
  EXPECT_TRUE(by.at("h1->E").ell.empty());
  check_structure(g, "nested");
}

TEST(Cfg, StructuralInvariantsOnBenchmarks) {
  for (const char* name : kAllPrograms) check_structure(build_cfg(support::load(name)), name);
}

TEST(Cfg, StructuralInvariantsOnNestedSource) {
  auto p = frontend::parse(
      "program n;\nparam N;\nint s;\nint a[N];\n"
      "for (i = 0; i < N; i++) { for (k = 0; k < N; k++) { s = s + 1; } a[i] = s; }\n"
      "for (m = 0; m < N; m++) { if (a[m] > 0) a[m] = 0; }\nensures true;\n");
  Cfg g = build_cfg(p);
  EXPECT_EQ(g.cutpoints().size(), 3u);
  check_structure(g, "n");
  for (const auto& s : segments(g)) {
    if (s.ell == "k") {
      EXPECT_EQ(s.outer_vars, (std::vector<std::string>{"i"}));
    }
  }
}

TEST(Cfg, RunCfgAgreesWithInterpreter) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int64_t> val(-10, 10);
  for (const char* name : kAllPrograms) {
    auto p = support::load(name);
    Cfg g = build_cfg(p);
    for (int64_t n = 1; n <= 8; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        std::map<std::string, int64_t> params;
        for (const auto& q : p.params) params[q] = n;
        exec::State s = exec::make_state(p, params);
        for (auto& [v, x] : s.scalars)
          if (!p.is_param(v)) x = val(rng);
        for (auto& [a, cells] : s.arrays)
          for (auto& c : cells) c = val(rng);
        exec::State t = s;
        auto o1 = exec::execute(p, s);
        auto o2 = exec::run_cfg(g, t);
        ASSERT_EQ(o1, o2) << name << " n=" << n;
        if (o1 == exec::Outcome::Ok) {
          EXPECT_EQ(s.arrays, t.arrays) << name;
        }
      }
  }
}

TEST(Cfg, DotOutputNamesEveryNode) {
  Cfg g = build_cfg(support::load("period4"));
  std::string dot = g.to_dot("period4");
  EXPECT_EQ(dot.rfind("digraph \"period4\"", 0), 0u);
  EXPECT_NE(dot.find("->"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}
