// Randomized runs with an observation point at the end of every loop body.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tileproof/exec/interp.hpp"

namespace tileproof::exec {

struct RunConfig {
  int64_t array_size = 8;
  int runs = 10;
  uint64_t seed = 1;
  int64_t value_lo = -10;
  int64_t value_hi = 10;
  std::map<std::string, int64_t> fixed;  // scalar overrides, e.g. MIN=2
  int max_retries = 200;                 // redraws allowed per accepted run
};

/// Observed array cell A[e] where e is evaluated in the iteration-start state.
struct Placeholder {
  std::string name;  // e.g. "a[i + 1]"
  std::string array;
  ExprP index;
};

struct LoopProbe {
  std::string cutpoint;  // label the tuples are reported under
  std::vector<Placeholder> cells;
};

/// loop index (pre-order) -> what to record there.
using Instrumentation = std::map<int, LoopProbe>;

struct TraceTuple {
  std::string cutpoint;
  int loop = 0;
  int64_t iteration = 0;
  int run = 0;
  std::vector<std::pair<std::string, int64_t>> values;  // ordered by name
};

class MiningUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Placeholders A[e] for every array A and every syntactic store index e in
/// each loop body, reported under the loop head label "h<k>".
Instrumentation default_instrumentation(const Program& p);

/// Random initial state: params = array_size, everything else drawn from
/// the value range, then `fixed` applied.
State random_state(const Program& p, const RunConfig& cfg, std::mt19937_64& rng);

std::vector<TraceTuple> run_random(const Program& p, const RunConfig& cfg);
std::vector<TraceTuple> run_random(const Program& p, const RunConfig& cfg,
                                   const Instrumentation& probes);

void write_jsonl(std::ostream& os, const std::vector<TraceTuple>& tuples);

}  // namespace tileproof::exec
