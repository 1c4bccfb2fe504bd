// Microbenchmarks for the solver-free stages.
#include <benchmark/benchmark.h>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/exec/trace.hpp"
#include "tileproof/frontend/parser.hpp"
#include "tileproof/miner/miner.hpp"
#include "tileproof/tiler/tile.hpp"
#include "tileproof/vcgen/bmc.hpp"
#include "tileproof/vcgen/symexec.hpp"

using namespace tileproof;

namespace {

const char* kNames[] = {"period4", "arrayupdate", "copydecoy", "revrefill"};

std::string path(int i) {
  return std::string(TILEPROOF_PROGRAMS_DIR) + "/" + kNames[i] + ".tla";
}

const cfg::Segment& first_body(const std::vector<cfg::Segment>& segs) {
  for (const auto& s : segs)
    if (s.closes_loop) return s;
  return segs.front();
}

void BM_Parse(benchmark::State& st) {
  std::string file = path(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(frontend::parse_file(file));
  st.SetLabel(kNames[st.range(0)]);
}
BENCHMARK(BM_Parse)->DenseRange(0, 3);

void BM_CfgAndSegments(benchmark::State& st) {
  auto p = frontend::parse_file(path(static_cast<int>(st.range(0))));
  for (auto _ : st) {
    auto g = cfg::build_cfg(p);
    benchmark::DoNotOptimize(cfg::segments(g));
  }
  st.SetLabel(kNames[st.range(0)]);
}
BENCHMARK(BM_CfgAndSegments)->DenseRange(0, 3);

void BM_CollectAccesses(benchmark::State& st) {
  auto p = frontend::parse_file(path(static_cast<int>(st.range(0))));
  auto g = cfg::build_cfg(p);
  auto segs = cfg::segments(g);
  const auto& body = first_body(segs);
  for (auto _ : st) benchmark::DoNotOptimize(tiler::collect_accesses(g, body));
  st.SetLabel(kNames[st.range(0)]);
}
BENCHMARK(BM_CollectAccesses)->DenseRange(0, 3);

void BM_Symexec(benchmark::State& st) {
  auto p = frontend::parse_file(path(static_cast<int>(st.range(0))));
  auto g = cfg::build_cfg(p);
  auto segs = cfg::segments(g);
  const auto& body = first_body(segs);
  for (auto _ : st) {
    smt::FreshNames fresh;
    benchmark::DoNotOptimize(vcgen::symexec(g, body, fresh));
  }
  st.SetLabel(kNames[st.range(0)]);
}
BENCHMARK(BM_Symexec)->DenseRange(0, 3);

void BM_EncodeBmc(benchmark::State& st) {
  auto p = frontend::parse_file(path(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(vcgen::encode_bmc(p).script.emit());
  st.SetLabel(kNames[st.range(0)]);
}
BENCHMARK(BM_EncodeBmc)->DenseRange(0, 3);

void BM_RandomRunsAndMining(benchmark::State& st) {
  auto p = frontend::parse_file(path(2));
  auto g = cfg::build_cfg(p);
  auto probes = exec::default_instrumentation(p);
  exec::RunConfig rc;
  rc.runs = static_cast<int>(st.range(0));
  for (auto _ : st) {
    auto t = exec::run_random(p, rc, probes);
    benchmark::DoNotOptimize(miner::mine(p, g, t, probes));
  }
}
BENCHMARK(BM_RandomRunsAndMining)->Arg(10)->Arg(100);

void BM_TileSimplify(benchmark::State& st) {
  std::vector<frontend::ExprP> exprs;
  for (int64_t b = 0; b < st.range(0); ++b)
    exprs.push_back(frontend::parse_expr("4 * l + " + std::to_string(b)));
  for (auto _ : st) benchmark::DoNotOptimize(tiler::simplify(exprs, "l"));
}
BENCHMARK(BM_TileSimplify)->Arg(4)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
