#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "tileproof/exec/interp.hpp"
#include "tileproof/exec/trace.hpp"
#include "tileproof/frontend/parser.hpp"

using namespace tileproof;
using namespace tileproof::exec;

namespace {

const char* kSafe[] = {"arrayupdate", "copy",   "copydecoy", "cpynrev",   "evenodd",
                       "find",        "init",   "largest",   "period4",   "revrefill",
                       "seqinit",     "smallest"};

std::string jsonl(const std::vector<TraceTuple>& t) {
  std::ostringstream os;
  write_jsonl(os, t);
  return os.str();
}

}  // namespace

TEST(Exec, LoopFreeProgramHasNoTraces) {
  auto p = frontend::parse("program z;\nparam N;\nint x;\nint a[N];\nx = 3;\nensures true;\n");
  EXPECT_TRUE(run_random(p, RunConfig{}).empty());
}

TEST(Exec, Period4WritesOnlyItsConstants) {
  auto p = support::load("period4");
  RunConfig cfg;
  cfg.array_size = 8;
  cfg.fixed["MIN"] = 2;
  std::mt19937_64 rng(3);
  for (int r = 0; r < 20; ++r) {
    State s = random_state(p, cfg, rng);
    ASSERT_EQ(s.scalars.at("MIN"), 2);
    ASSERT_EQ(execute(p, s), Outcome::Ok);
    for (int64_t v : s.arrays.at("volArray")) {
      EXPECT_TRUE(v == 5 || v == 7 || v == 3 || v == 1 || v == 0) << v;
      EXPECT_NE(v, 1);  // 1 < MIN, so that slot is zeroed
    }
    EXPECT_TRUE(eval_post(p, s));
  }
}

TEST(Exec, AssertionFailsOnOneBadCell) {
  auto p = support::load("period4");
  State s = make_state(p, {{"COUNT", 8}});
  s.scalars["MIN"] = 2;
  ASSERT_EQ(execute(p, s), Outcome::Ok);
  ASSERT_TRUE(eval_post(p, s));
  s.arrays["volArray"][5] = 1;
  EXPECT_FALSE(eval_post(p, s));
}

TEST(Exec, SameSeedSameTraces) {
  for (const char* name : {"copy", "period4", "arrayupdate"}) {
    auto p = support::load(name);
    RunConfig cfg;
    cfg.seed = 42;
    auto a = run_random(p, cfg), b = run_random(p, cfg);
    ASSERT_FALSE(a.empty()) << name;
    EXPECT_EQ(jsonl(a), jsonl(b)) << name;
    cfg.seed = 43;
    EXPECT_NE(jsonl(a), jsonl(run_random(p, cfg))) << name;
  }
}

TEST(Exec, TracesCarryOneTuplePerIteration) {
  auto p = support::load("copy");
  RunConfig cfg;
  cfg.array_size = 5;
  cfg.runs = 3;
  auto t = run_random(p, cfg);
  ASSERT_EQ(t.size(), 15u);
  for (const auto& x : t) {
    EXPECT_EQ(x.cutpoint, "h1");
    EXPECT_FALSE(x.values.empty());
    EXPECT_TRUE(std::is_sorted(x.values.begin(), x.values.end()));
  }
}

TEST(Exec, RandomRunsOfSafeProgramsNeverViolate) {
  for (const char* name : kSafe) {
    auto p = support::load(name);
    for (int64_t size : {4, 8, 12}) {
      RunConfig cfg;
      cfg.array_size = size;
      std::mt19937_64 rng(static_cast<uint64_t>(size) * 7919);
      int ok = 0;
      for (int r = 0; r < 200; ++r) {
        State s = random_state(p, cfg, rng);
        if (!eval_assertion(p, p.pre, s)) continue;
        Outcome o = execute(p, s);
        if (o == Outcome::AssumeFailed) continue;
        ASSERT_EQ(o, Outcome::Ok) << name;
        ++ok;
        ASSERT_TRUE(eval_post(p, s)) << name << " size " << size;
      }
      EXPECT_GT(ok, 0) << name << " size " << size;
    }
  }
}

TEST(Exec, SeededBugIsObservable) {
  auto p = support::load("init-u");
  State s = make_state(p, {{"N", 4}});
  ASSERT_EQ(execute(p, s), Outcome::Ok);
  EXPECT_FALSE(eval_post(p, s));
}

TEST(Exec, AbnormalOutcomes) {
  auto p = frontend::parse("program o;\nparam N;\nint x;\nint a[N];\na[N] = 1;\nensures true;\n");
  State s = make_state(p, {{"N", 3}});
  EXPECT_EQ(execute(p, s), Outcome::OutOfBounds);

  auto q = frontend::parse("program d;\nparam N;\nint x;\nint a[N];\nx = 5 / x;\nensures true;\n");
  State t = make_state(q, {{"N", 3}});
  EXPECT_EQ(execute(q, t), Outcome::DivByZero);

  auto r = frontend::parse("program f;\nparam N;\nint x;\nint a[N];\nassume(x > 0);\nensures true;\n");
  State u = make_state(r, {{"N", 3}});
  EXPECT_EQ(execute(r, u), Outcome::AssumeFailed);

  EXPECT_THROW(make_state(p, {{"N", 0}}), RunError);
}

TEST(Exec, StepLimitStopsLongRuns) {
  auto p = support::load("copy");
  State s = make_state(p, {{"N", 50}});
  EXPECT_EQ(execute(p, s, nullptr, 10), Outcome::StepLimit);
}
