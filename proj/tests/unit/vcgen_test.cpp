#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tileproof/frontend/parser.hpp"
#include "tileproof/frontend/printer.hpp"
#include "tileproof/tiler/tile.hpp"
#include "tileproof/vcgen/bmc.hpp"
#include "tileproof/vcgen/lower.hpp"
#include "tileproof/vcgen/symexec.hpp"
#include "tileproof/vcgen/vc.hpp"

using namespace tileproof;
using namespace tileproof::vcgen;
using frontend::parse_expr;

namespace {

struct Loop {
  frontend::Program p;
  cfg::Cfg g;
  std::vector<cfg::Segment> segs;
  const cfg::Segment* body = nullptr;

  explicit Loop(frontend::Program prog) : p(std::move(prog)), g(cfg::build_cfg(p)) {
    segs = cfg::segments(g);
    for (const auto& s : segs)
      if (s.closes_loop && !body) body = &s;
  }
  LoopVc vc() const {
    LoopVc v;
    v.p = &p;
    v.g = &g;
    v.body = body;
    v.assumptions = global_assumptions(p);
    return v;
  }
};

Loop loop_of(const std::string& src) { return Loop(frontend::parse(src)); }

tiler::TilePredicate tile(const std::vector<std::string>& exprs, const std::string& ell) {
  tiler::TilePredicate t;
  t.array = "A";
  t.ell = ell;
  for (const auto& e : exprs) {
    t.init_exprs.push_back(parse_expr(e));
    t.exprs.push_back(parse_expr(e));
    t.affine.push_back(frontend::affine_in(parse_expr(e), ell));
  }
  return t;
}

/// pass / fail / unknown, with the quantifier-free fallback on unknown.
std::string outcome(const CheckTask& t) {
  if (t.refuted) return "fail";
  auto st = support::check(t.script);
  if (st != smt::Status::Unsat && st != smt::Status::Sat && t.fallback)
    st = support::check(*t.fallback);
  if (st == smt::Status::Unsat) return "pass";
  if (st == smt::Status::Sat) return "fail";
  return "unknown";
}

const char* kFill =
    "program fill;\nparam N;\nint MIN;\nint A[N];\n"
    "for (l = 0; l < N; l++) A[l] = MIN;\n"
    "ensures forall j :: 0 <= j && j < N ==> A[j] >= MIN;\n";

}  // namespace

TEST(Vcgen, TaskNames) {
  EXPECT_STREQ(to_string(TaskKind::T2Star), "T2*");
  EXPECT_STREQ(to_string(TaskKind::T2DStar), "T2**");
  EXPECT_STREQ(to_string(TaskKind::Tightness), "TIGHTNESS");
  EXPECT_STREQ(file_tag(TaskKind::T3Star), "T3s");
  EXPECT_STREQ(file_tag(TaskKind::T2DStar), "T2ss");
}

TEST(Vcgen, T1AcceptsCoveringTileOnly) {
  TP_REQUIRE_SOLVER();
  Loop L = loop_of(kFill);
  EXPECT_EQ(outcome(encode_t1(L.vc(), tile({"l"}, "l"), L.p.post)), "pass");
  EXPECT_EQ(outcome(encode_t1(L.vc(), tile({"2 * l"}, "l"), L.p.post)), "fail");
  // A tile that reaches past the array end.
  EXPECT_EQ(outcome(encode_t1(L.vc(), tile({"l + 1"}, "l"), L.p.post)), "fail");
}

TEST(Vcgen, T2StarChecksTheOwnTile) {
  TP_REQUIRE_SOLVER();
  Loop good = loop_of(kFill);
  EXPECT_EQ(outcome(encode_t2star(good.vc(), tile({"l"}, "l"), good.p.post)), "pass");
  std::string bad_src = kFill;
  bad_src.replace(bad_src.find("A[l] = MIN;"), 11, "A[l] = MIN - 1;");
  Loop bad = loop_of(bad_src);
  EXPECT_EQ(outcome(encode_t2star(bad.vc(), tile({"l"}, "l"), bad.p.post)), "fail");
}

TEST(Vcgen, T3StarCatchesWritesToEarlierTiles) {
  TP_REQUIRE_SOLVER();
  const char* ok =
      "program id;\nparam N;\nint A[N];\n"
      "for (l = 0; l < N; l++) A[l] = l;\n"
      "ensures forall j :: 0 <= j && j < N ==> A[j] == j;\n";
  const char* clobber =
      "program clobber;\nparam N;\nint A[N];\n"
      "for (l = 0; l < N; l++) { A[l] = l; A[0] = 7; }\n"
      "ensures forall j :: 0 <= j && j < N ==> A[j] == j;\n";
  Loop a = loop_of(ok), b = loop_of(clobber);
  EXPECT_EQ(outcome(encode_t3star(a.vc(), tile({"l"}, "l"), a.p.post)), "pass");
  EXPECT_EQ(outcome(encode_t3star(b.vc(), tile({"l"}, "l"), b.p.post)), "fail");
}

TEST(Vcgen, T2DoubleStarOnLoopFreeSegments) {
  TP_REQUIRE_SOLVER();
  auto run = [](const std::string& stmt) {
    auto p = frontend::parse("program s;\nparam N;\nint c;\nint A[N];\n" + stmt +
                             "\nensures forall j :: 0 <= j && j < N ==> A[j] == 0;\n");
    auto g = cfg::build_cfg(p);
    auto segs = cfg::segments(g);
    EXPECT_EQ(segs.size(), 1u);
    return outcome(encode_t2dstar(p, g, segs.at(0), global_assumptions(p), {p.post}, p.post));
  };
  EXPECT_EQ(run("skip;"), "pass");
  EXPECT_EQ(run("A[0] = 0;"), "pass");
  EXPECT_EQ(run("A[0] = c;"), "fail");
  EXPECT_EQ(run("assume(c == 0);\nA[0] = c;"), "pass");
}

TEST(Vcgen, ZeroTripEntry) {
  TP_REQUIRE_SOLVER();
  Loop L = loop_of(
      "program z;\nparam N;\nint M;\nint A[N];\n"
      "for (l = 0; l < M; l++) A[l % N] = 0;\n"
      "ensures forall j :: 0 <= j && j < M ==> A[j] == 0;\n");
  EXPECT_EQ(outcome(encode_zero_trip(L.vc(), {}, L.p.post)), "pass");
  auto wide = frontend::parse_assertion("forall j :: 0 <= j && j < N ==> A[j] == 0");
  EXPECT_EQ(outcome(encode_zero_trip(L.vc(), {}, wide)), "fail");
  EXPECT_EQ(outcome(encode_zero_trip(L.vc(), {wide}, wide)), "pass");
}

TEST(Vcgen, TightnessNeedsEveryTileCellWritten) {
  TP_REQUIRE_SOLVER();
  auto src = [](bool all) {
    std::string s =
        "program q;\nparam N;\nint A[N];\nassume(N % 4 == 0);\n"
        "for (l = 0; l < N / 4; l++) { A[4 * l] = 1; A[4 * l + 1] = 1; A[4 * l + 2] = 1;";
    if (all) s += " A[4 * l + 3] = 1;";
    return s + " }\nensures true;\n";
  };
  auto quad = tile({"4 * l", "4 * l + 1", "4 * l + 2", "4 * l + 3"}, "l");
  Loop full = loop_of(src(true)), part = loop_of(src(false));
  EXPECT_EQ(outcome(encode_tightness(full.vc(), quad, 64)), "pass");
  EXPECT_EQ(outcome(encode_tightness(part.vc(), quad, 64)), "fail");
}

TEST(Vcgen, Period4TightnessPasses) {
  TP_REQUIRE_SOLVER();
  Loop L(support::load("period4"));
  tiler::TileContext ctx{&L.g, L.body, global_assumptions(L.p), support::query_fn()};
  auto r = tiler::find_heuristic_tile(ctx, "volArray");
  ASSERT_TRUE(r.tile);
  EXPECT_EQ(outcome(encode_tightness(L.vc(), *r.tile, 256)), "pass");
}

TEST(Vcgen, BmcFindsSeededBugOnly) {
  TP_REQUIRE_SOLVER();
  auto bug = support::load("init-u");
  auto task = encode_bmc(bug);
  auto r = support::query_fn()(task.script, "bmc");
  ASSERT_EQ(r.status, smt::Status::Sat);
  ASSERT_TRUE(r.model);
  auto cex = replay(bug, *r.model);
  ASSERT_TRUE(cex);
  EXPECT_GE(cex->scalars.at("N"), 3);
  ASSERT_FALSE(cex->witness.empty());
  EXPECT_EQ(cex->witness[0].second, 2);

  EXPECT_EQ(support::check(encode_bmc(support::load("period4")).script), smt::Status::Unsat);

  auto vac = frontend::parse(
      "program v;\nparam N;\nint a[N];\nfor (i = 0; i < N; i++) a[i] = 1;\n"
      "ensures forall j :: false ==> a[j] == 7;\n");
  EXPECT_EQ(support::check(encode_bmc(vac).script), smt::Status::Unsat);
}

TEST(Vcgen, ConfirmReplaysConcreteInputs) {
  auto p = support::load("init-u");
  exec::State s = exec::make_state(p, {{"N", 4}});
  auto cex = confirm(p, s);
  ASSERT_TRUE(cex);
  EXPECT_EQ(cex->witness, (std::vector<std::pair<std::string, int64_t>>{{"j", 2}}));

  auto small = exec::make_state(p, {{"N", 2}});
  EXPECT_FALSE(confirm(p, small));

  auto ok = support::load("init");
  EXPECT_FALSE(confirm(ok, exec::make_state(ok, {{"N", 5}})));
}

TEST(Vcgen, FindViolationIsLexicographicallyFirst) {
  auto p = support::load("init");
  exec::State s = exec::make_state(p, {{"N", 6}});
  for (auto& c : s.arrays["a"]) c = 42;
  EXPECT_FALSE(find_violation(p, p.post, s));
  s.arrays["a"][4] = 0;
  s.arrays["a"][1] = 0;
  auto v = find_violation(p, p.post, s);
  ASSERT_TRUE(v);
  EXPECT_EQ((*v)[0].second, 1);
}

TEST(Vcgen, GlobalAssumptionsIncludeEarlyAssumes) {
  auto p = support::load("period4");
  std::vector<std::string> texts;
  for (const auto& e : global_assumptions(p)) texts.push_back(frontend::to_string(e));
  EXPECT_NE(std::find(texts.begin(), texts.end(), "COUNT % 4 == 0"), texts.end());
  EXPECT_NE(std::find(texts.begin(), texts.end(), "COUNT >= 1"), texts.end());
}
