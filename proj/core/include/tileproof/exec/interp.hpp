// Concrete interpreter over 64-bit integers. Overflow, division by zero,
// out-of-bounds access and failed assumptions abort the run.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/frontend/ast.hpp"

namespace tileproof::exec {

using frontend::ExprP;
using frontend::Program;
using frontend::QuantAssertion;
using frontend::StmtP;

struct State {
  std::map<std::string, int64_t> scalars;
  std::map<std::string, std::vector<int64_t>> arrays;

  bool operator==(const State& o) const = default;
};

enum class Outcome { Ok, AssumeFailed, Overflow, DivByZero, OutOfBounds, StepLimit, Unbound };

const char* to_string(Outcome o);

class RunError : public std::runtime_error {
 public:
  RunError(Outcome o, const std::string& what) : std::runtime_error(what), outcome(o) {}
  Outcome outcome;
};

/// `bound` holds quantified index variables; they shadow state scalars.
int64_t eval_int(const ExprP& e, const State& s,
                 const std::map<std::string, int64_t>* bound = nullptr);
bool eval_bool(const ExprP& e, const State& s,
               const std::map<std::string, int64_t>* bound = nullptr);

/// Called once per loop iteration, after the body and before the counter
/// increment. `start` is the state when the iteration began.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void iteration_end(int loop, int64_t counter, const State& start,
                             const State& now) = 0;
};

/// Runs p.body on s in place. Never throws RunError; returns the reason
/// instead.
Outcome execute(const Program& p, State& s, Observer* obs = nullptr,
                int64_t max_steps = 10'000'000);

/// Same semantics, driven by the control-flow graph (co-simulation oracle).
Outcome run_cfg(const cfg::Cfg& g, State& s, int64_t max_steps = 10'000'000);

/// Zeroed state with params bound and arrays sized from them. Throws
/// RunError when a size is not positive or a parameter is missing.
State make_state(const Program& p, const std::map<std::string, int64_t>& params);

/// Truth of q on s by finite expansion of the index variables. Throws
/// RunError when the range is unbounded or the body reads out of bounds.
bool eval_assertion(const Program& p, const QuantAssertion& q, const State& s);

/// Convenience: eval_assertion(p, p.post, s).
bool eval_post(const Program& p, const State& s);

}  // namespace tileproof::exec
