#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tileproof/smt/model.hpp"
#include "tileproof/smt/script.hpp"
#include "tileproof/smt/sexpr.hpp"
#include "tileproof/smt/solver.hpp"
#include "tileproof/smt/term.hpp"

using namespace tileproof;
using namespace tileproof::smt;

namespace {

// Random linear terms over x, y and a[...]
struct TermGen {
  std::mt19937_64 rng;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  TermP integer(int depth) {
    if (depth == 0 || pick(4) == 0) {
      switch (pick(4)) {
        case 0: return int_lit(pick(21) - 10);
        case 1: return var("x");
        case 2: return var("y");
        default: return select(array_var("a"), var("x"));
      }
    }
    switch (pick(6)) {
      case 0: return add(integer(depth - 1), integer(depth - 1));
      case 1: return sub(integer(depth - 1), integer(depth - 1));
      case 2: return mul(int_lit(pick(5) + 1), integer(depth - 1));
      case 3: return neg(integer(depth - 1));
      case 4: return ite(boolean(depth - 1), integer(depth - 1), integer(depth - 1));
      default: return select(store(array_var("a"), integer(depth - 1), integer(0)), integer(depth - 1));
    }
  }
  TermP boolean(int depth) {
    if (depth == 0 || pick(3) == 0) {
      switch (pick(5)) {
        case 0: return lt(integer(1), integer(1));
        case 1: return le(integer(1), integer(1));
        case 2: return eq(integer(1), integer(1));
        case 3: return ge(integer(1), integer(1));
        default: return gt(integer(1), integer(1));
      }
    }
    switch (pick(4)) {
      case 0: return and_(boolean(depth - 1), boolean(depth - 1));
      case 1: return or_(boolean(depth - 1), boolean(depth - 1));
      case 2: return not_(boolean(depth - 1));
      default: return implies(boolean(depth - 1), boolean(depth - 1));
    }
  }
};

const std::map<std::string, Sort> kEnv = {{"x", Sort::Int}, {"y", Sort::Int}, {"a", Sort::IntArray}};

}  // namespace

TEST(Smt, FalseIsUnsat) {
  TP_REQUIRE_SOLVER();
  Script s;
  s.add(fls());
  EXPECT_EQ(support::check(s), Status::Unsat);
}

TEST(Smt, SatQueryReturnsModel) {
  TP_REQUIRE_SOLVER();
  Script s;
  s.want_model = true;
  s.add(eq(var("x"), int_lit(3)));
  s.add(eq(select(array_var("a"), int_lit(2)), add(var("x"), int_lit(4))));
  s.get_values.push_back(add(var("x"), int_lit(1)));
  auto r = support::query_fn()(s, "model");
  ASSERT_EQ(r.status, Status::Sat);
  ASSERT_TRUE(r.model);
  EXPECT_EQ(r.model->int_value("x"), 3);
  EXPECT_EQ(r.model->array_value("a").at(2), 7);
  ASSERT_EQ(r.model->get_values.size(), 1u);
  EXPECT_EQ(r.model->get_values.begin()->second, 4);
}

TEST(Smt, TinyTimeoutIsNotAVerdict) {
  TP_REQUIRE_SOLVER();
  // Nonlinear search that z3 does not finish in a millisecond.
  Script s;
  auto x = var("x"), y = var("y"), z = var("z");
  s.add(gt(x, int_lit(1)));
  s.add(gt(y, int_lit(1)));
  s.add(gt(z, int_lit(1)));
  s.add(eq(add(mul(mul(x, x), x), mul(mul(y, y), y)), mul(mul(z, z), z)));
  auto r = support::query_fn(1)(s, "timeout");
  EXPECT_NE(r.status, Status::Unsat);
  EXPECT_NE(r.status, Status::Sat);
}

TEST(Smt, EmissionIsDeterministic) {
  TermGen a{std::mt19937_64(7)}, b{std::mt19937_64(7)};
  for (int i = 0; i < 100; ++i) {
    Script s, t;
    s.add(a.boolean(3));
    t.add(b.boolean(3));
    EXPECT_EQ(s.emit(), t.emit());
  }
}

TEST(Smt, EmittedTermsReparse) {
  TermGen gen{std::mt19937_64(21)};
  for (int i = 0; i < 300; ++i) {
    TermP t = i % 2 ? gen.integer(4) : gen.boolean(3);
    std::string text = emit(t);
    auto parsed = parse_sexprs(text);
    ASSERT_EQ(parsed.size(), 1u) << text;
    TermP back = to_term(parsed[0], kEnv);
    EXPECT_EQ(emit(back), text);
  }
}

TEST(Smt, QuantifiedTermsReparse) {
  TermP t = forall({{"j", Sort::Int}},
                   implies(and_(le(int_lit(0), var("j")), lt(var("j"), var("N"))),
                           eq(select(array_var("a"), var("j")), int_lit(0))));
  std::string text = emit(t);
  auto back = to_term(parse_sexprs(text).at(0), {{"a", Sort::IntArray}});
  EXPECT_TRUE(equal(t, back)) << text;
}

TEST(Smt, LogicHeaderFollowsContent) {
  Script qf;
  qf.add(lt(var("x"), select(array_var("a"), var("y"))));
  EXPECT_EQ(qf.logic(), "QF_AUFLIA");
  EXPECT_NE(qf.emit().find("(set-logic QF_AUFLIA)"), std::string::npos);

  Script q;
  q.add(forall({{"j", Sort::Int}}, ge(select(array_var("a"), var("j")), int_lit(0))));
  EXPECT_EQ(q.logic(), "AUFLIA");

  Script nl;
  nl.add(eq(mul(var("x"), var("y")), int_lit(6)));
  EXPECT_EQ(nl.logic(), "QF_AUFNIA");
}

TEST(Smt, ModelEvaluationAgreesWithSolver) {
  TP_REQUIRE_SOLVER();
  TermGen gen{std::mt19937_64(5)};
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    TermP f = gen.boolean(3);
    Script s;
    s.want_model = true;
    s.add(f);
    // Every variable is declared even when the formula folds it away.
    s.add(eq(var("x"), var("x")));
    s.add(eq(var("y"), var("y")));
    s.add(eq(select(array_var("a"), int_lit(0)), select(array_var("a"), int_lit(0))));
    auto r = support::query_fn()(s, "eval");
    if (r.status != Status::Sat) continue;
    ASSERT_TRUE(r.model);
    auto v = eval_bool(f, *r.model);
    ASSERT_TRUE(v) << emit(f);
    EXPECT_TRUE(*v) << emit(f) << "\n" << r.output;
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Smt, BuildersFoldConstants) {
  EXPECT_TRUE(equal(add(int_lit(2), int_lit(3)), int_lit(5)));
  EXPECT_TRUE(is_true(lt(int_lit(1), int_lit(2))));
  EXPECT_TRUE(is_false(and_(tru(), fls())));
  EXPECT_FALSE(is_nonlinear(mul(int_lit(3), var("x"))));
  EXPECT_TRUE(is_nonlinear(mul(var("y"), var("x"))));
}

TEST(Smt, FreshNamesDoNotRepeat) {
  FreshNames f;
  std::set<std::string> seen;
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(seen.insert(f.fresh("j")).second);
  EXPECT_EQ(f.fresh("k"), "k!0");
}

TEST(Smt, ParsesBareModelList) {
  auto s = parse_sexprs(
      "((define-fun x () Int (- 4))\n"
      " (define-fun a () (Array Int Int) (store ((as const (Array Int Int)) 1) 3 9)))");
  Model m = parse_model(s.at(0));
  EXPECT_EQ(m.int_value("x"), -4);
  EXPECT_EQ(m.array_value("a").at(3), 9);
  EXPECT_EQ(m.array_value("a").at(0), 1);
}
