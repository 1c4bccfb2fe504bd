#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tileproof/frontend/linear.hpp"
#include "tileproof/frontend/parser.hpp"
#include "tileproof/frontend/printer.hpp"
#include "tileproof/tiler/tile.hpp"
#include "tileproof/vcgen/lower.hpp"

using namespace tileproof;
using namespace tileproof::tiler;
using frontend::parse_expr;
using frontend::to_string;

namespace {

/// First closing segment of a program, with what the tiler needs.
struct Fixture {
  frontend::Program p;
  cfg::Cfg g;
  std::vector<cfg::Segment> segs;
  const cfg::Segment* body = nullptr;
  std::vector<frontend::ExprP> G;

  explicit Fixture(frontend::Program prog) : p(std::move(prog)), g(cfg::build_cfg(p)) {
    segs = cfg::segments(g);
    for (const auto& s : segs)
      if (s.closes_loop && !body) body = &s;
    G = vcgen::global_assumptions(p);
  }
  TileContext ctx() const {
    TileContext c;
    c.g = &g;
    c.seg = body;
    c.assumptions = G;
    if (support::have_solver()) c.query = support::query_fn();
    return c;
  }
  TileResult tile(const std::string& array, bool reads = false) const {
    return find_heuristic_tile(ctx(), array, reads);
  }
  frontend::ExprP trip() const { return g.loops()[body->loop].trip; }
};

Fixture fixture(const std::string& name) { return Fixture(support::load(name)); }

bool same_expr(const frontend::ExprP& a, const std::string& b) {
  return frontend::equal(frontend::normalize(a), frontend::normalize(parse_expr(b)));
}

/// Each expression in `want` matches exactly one in `got`.
void expect_exprs(const std::vector<frontend::ExprP>& got, const std::vector<std::string>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (const auto& w : want) {
    int hits = 0;
    for (const auto& e : got) hits += same_expr(e, w);
    EXPECT_EQ(hits, 1) << w;
  }
}

/// Solver equivalence of two boolean expressions under assumptions.
bool equivalent(const frontend::ExprP& a, const frontend::ExprP& b,
                const std::vector<frontend::ExprP>& assumptions) {
  smt::Script s;
  for (const auto& t : vcgen::lower_all(assumptions)) s.add(t);
  s.add(smt::not_(smt::eq(vcgen::lower(a), vcgen::lower(b))));
  return support::check(s) == smt::Status::Unsat;
}

TilePredicate manual(const std::vector<std::string>& exprs) {
  TilePredicate t;
  t.array = "A";
  t.ell = "l";
  for (const auto& e : exprs) {
    t.init_exprs.push_back(parse_expr(e));
    t.exprs.push_back(parse_expr(e));
    t.affine.push_back(frontend::affine_in(parse_expr(e), "l"));
  }
  return t;
}

}  // namespace

TEST(Tiler, Period4InitialTileHasFourCells) {
  TP_REQUIRE_SOLVER();
  auto f = fixture("period4");
  auto r = f.tile("volArray");
  ASSERT_EQ(r.status, TileStatus::Ok) << r.reason;
  expect_exprs(r.tile->init_exprs, {"4 * i", "4 * i + 1", "4 * i + 2", "4 * i + 3"});
  expect_exprs(r.tile->exprs, {"4 * i", "4 * i + 1", "4 * i + 2", "4 * i + 3"});
  ASSERT_TRUE(r.tile->closed_form);
  EXPECT_TRUE(equivalent(r.tile->display(), parse_expr("4 * i <= j && j < 4 * i + 4"), f.G));
  EXPECT_EQ(check_closed_form(*r.tile, f.G, support::query_fn()), CheckStatus::Pass);
}

TEST(Tiler, Period4SourceForm) {
  TP_REQUIRE_SOLVER();
  auto f = fixture("period4");
  auto r = f.tile("volArray");
  ASSERT_TRUE(r.tile);
  const auto& loop = f.g.loops()[f.body->loop];
  auto src = source_form(r.tile->display(), r.tile->ell, loop.stmt->origin);
  EXPECT_TRUE(equivalent(src, parse_expr("4 * i - 4 <= j && j < 4 * i"), f.G)) << to_string(src);
}

TEST(Tiler, OverlappingUpdatesRefineToOneCell) {
  TP_REQUIRE_SOLVER();
  auto f = fixture("arrayupdate");
  auto r = f.tile("A");
  ASSERT_EQ(r.status, TileStatus::Ok) << r.reason;
  expect_exprs(r.tile->init_exprs, {"l", "l + 1"});
  expect_exprs(r.tile->exprs, {"l"});
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_TRUE(same_expr(r.removed[0], "l + 1"));
  EXPECT_TRUE(equivalent(r.tile->display_init(), parse_expr("l <= j && j <= l + 1"), f.G));
  EXPECT_TRUE(equivalent(r.tile->display(), parse_expr("j == l"), f.G));
}

TEST(Tiler, IndexThroughScalarIsSubstituted) {
  TP_REQUIRE_SOLVER();
  Fixture f(frontend::parse(
      "program x;\nparam N;\nint x;\nint A[N];\n"
      "for (l = 0; l < N - 2; l++) { x = l + 2; A[x] = 0; }\nensures true;\n"));
  auto r = f.tile("A");
  ASSERT_EQ(r.status, TileStatus::Ok) << r.reason;
  expect_exprs(r.tile->exprs, {"l + 2"});
}

TEST(Tiler, SingleStoreGivesPointTile) {
  TP_REQUIRE_SOLVER();
  auto f = fixture("init");
  auto r = f.tile("a");
  ASSERT_EQ(r.status, TileStatus::Ok);
  expect_exprs(r.tile->exprs, {"i"});
  EXPECT_TRUE(r.removed.empty());
}

TEST(Tiler, OpaqueIndexIsReported) {
  Fixture f(frontend::parse(
      "program o;\nparam N;\nint A[N], B[N];\n"
      "for (l = 0; l < N; l++) { B[l] = 0; A[B[l] % N] = 0; }\nensures true;\n"));
  auto r = f.tile("A");
  EXPECT_EQ(r.status, TileStatus::Opaque);
  EXPECT_FALSE(r.tile);
}

TEST(Tiler, Simplify) {
  EXPECT_FALSE(simplify({parse_expr("2 * l"), parse_expr("2 * l + 3")}, "l"));
  auto one = simplify({parse_expr("l")}, "l");
  ASSERT_TRUE(one);
  EXPECT_TRUE(same_expr(one->lo, "l"));
  EXPECT_TRUE(same_expr(one->hi, "l + 1"));
  auto four = simplify({parse_expr("4 * l + 2"), parse_expr("4 * l"), parse_expr("4 * l + 3"),
                        parse_expr("4 * l + 1")},
                       "l");
  ASSERT_TRUE(four);
  EXPECT_EQ(to_string(interval_formula(*four, "j")), "4 * l <= j && j < 4 * l + 4");
  // Different slopes never form an interval.
  EXPECT_FALSE(simplify({parse_expr("l"), parse_expr("2 * l + 1")}, "l"));
}

TEST(Tiler, StrictChecks) {
  TP_REQUIRE_SOLVER();
  std::vector<frontend::ExprP> G = {parse_expr("N >= 1")};
  auto q = support::query_fn();
  auto trip = parse_expr("N");

  auto quad = manual({"4 * l", "4 * l + 1", "4 * l + 2", "4 * l + 3"});
  EXPECT_TRUE(strict_validate(quad, parse_expr("N / 4"), G, q).pass());

  auto pair = manual({"l", "l + 1"});
  auto rp = strict_validate(pair, trip, G, q);
  EXPECT_EQ(rp.disjoint, CheckStatus::Fail);
  EXPECT_EQ(rp.range_like, CheckStatus::Pass);

  auto even = manual({"2 * l"});
  auto re = strict_validate(even, trip, G, q);
  EXPECT_EQ(re.disjoint, CheckStatus::Pass);
  EXPECT_EQ(re.range_like, CheckStatus::Pass);
  EXPECT_EQ(re.compact, CheckStatus::Fail);

  auto gap = manual({"3 * l", "3 * l + 2"});
  EXPECT_EQ(strict_validate(gap, trip, G, q).range_like, CheckStatus::Fail);
}

TEST(Tiler, RefinedTileImpliesInitialAndHasNoOverlap) {
  TP_REQUIRE_SOLVER();
  int tiled = 0;
  for (const auto& tc : oracle::tile_corpus(30, 3)) {
    Fixture f(frontend::parse(tc.source));
    auto r = f.tile("A");
    // Refinement may drop everything when each cell is rewritten later.
    if (r.status == TileStatus::NoTile) continue;
    ASSERT_EQ(r.status, TileStatus::Ok) << tc.name << ": " << r.reason;
    ++tiled;
    const auto& t = *r.tile;
    // Survivors come from the initial tile.
    for (const auto& e : t.exprs) {
      bool found = false;
      for (const auto& i : t.init_exprs) found = found || frontend::equal(e, i);
      EXPECT_TRUE(found) << tc.name << " " << to_string(e);
    }
    auto init = oracle::tabulate(f.p, t.init_formula(), t.ell, t.j, tc.nmax);
    auto fin = oracle::tabulate(f.p, t.formula(), t.ell, t.j, tc.nmax);
    EXPECT_TRUE(oracle::brute_strict(fin, tc.nmax).disjoint) << tc.name << "\n" << tc.source;
    for (int64_t n = 1; n <= tc.nmax; ++n) {
      int64_t E = std::min(init.trip[static_cast<size_t>(n)], oracle::kMaxEll);
      for (int64_t l = 0; l < E; ++l)
        for (int64_t j = -oracle::kWindow + 1; j < oracle::kWindow; ++j) {
          if (fin.at(n, l, j)) {
            EXPECT_TRUE(init.at(n, l, j)) << tc.name << " N=" << n << " l=" << l << " j=" << j;
          }
        }
    }
  }
  EXPECT_GE(tiled, 20);
}

TEST(Tiler, SimplifyAgreesWithOffsetsOracle) {
  for (const auto& tc : oracle::tile_corpus(50, 8)) {
    auto p = frontend::parse(tc.source);
    std::vector<frontend::ExprP> exprs;
    for (const auto& e : tc.exprs) exprs.push_back(parse_expr(e));
    auto iv = simplify(exprs, "l");
    EXPECT_EQ(iv.has_value(), oracle::brute_consecutive(p, exprs, "l", tc.nmax))
        << tc.name << "\n" << tc.source;
  }
}

TEST(Tiler, ReadTilesForReadOnlyLoops) {
  TP_REQUIRE_SOLVER();
  auto f = fixture("find");
  auto r = f.tile("a", true);
  ASSERT_EQ(r.status, TileStatus::Ok) << r.reason;
  EXPECT_TRUE(r.tile->from_reads);
  expect_exprs(r.tile->exprs, {"i"});
}
