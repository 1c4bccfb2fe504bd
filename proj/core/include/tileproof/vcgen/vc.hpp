// Verification conditions for tiled loops and loop-free segments.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/frontend/ast.hpp"
#include "tileproof/smt/script.hpp"
#include "tileproof/tiler/tile.hpp"
#include "tileproof/vcgen/lower.hpp"

namespace tileproof::vcgen {

using frontend::Program;
using frontend::QuantAssertion;

enum class TaskKind { T1, T2Star, T3Star, T2DStar, ZeroTrip, Bmc, Tightness, Strict };

const char* to_string(TaskKind k);  // "T1", "T2*", ...
const char* file_tag(TaskKind k);   // "T1", "T2s", ... (safe in file names)

/// One solver query. Every kind except Bmc holds when the script is unsat.
struct CheckTask {
  TaskKind kind = TaskKind::T1;
  std::string segment;  // e.g. "h1-h1"
  std::string subject;  // printed target, for reports
  smt::Script script;
  std::optional<smt::Script> fallback;  // quantifier-free variant, tried on unknown
  std::optional<std::string> refuted;   // fails without a query, with this reason
};

struct LoopVc {
  const Program* p = nullptr;
  const cfg::Cfg* g = nullptr;
  const cfg::Segment* body = nullptr;       // closing segment of the loop
  std::vector<frontend::ExprP> assumptions;  // global facts
  std::vector<QuantAssertion> inv;          // facts at the head the loop cannot change
};

/// Names the loop body writes (counter included).
void loop_write_set(const cfg::Cfg& g, int loop, std::set<std::string>& scalars,
                    std::set<std::string>& arrays);

bool mentions_any(const QuantAssertion& q, const std::set<std::string>& scalars,
                  const std::set<std::string>& arrays);

/// Every index the target constrains lies in some tile, and every tile lies
/// inside the array (checked for trip >= 1).
CheckTask encode_t1(const LoopVc& vc, const tiler::TilePredicate& t, const QuantAssertion& target);

/// Iteration l establishes the target on its own tile, given earlier tiles.
CheckTask encode_t2star(const LoopVc& vc, const tiler::TilePredicate& t,
                        const QuantAssertion& target);

/// Iteration l preserves the target on the tiles of earlier iterations.
CheckTask encode_t3star(const LoopVc& vc, const tiler::TilePredicate& t,
                        const QuantAssertion& target);

/// The target holds at loop entry when the trip count is not positive.
CheckTask encode_zero_trip(const LoopVc& vc, const std::vector<QuantAssertion>& at_head,
                           const QuantAssertion& target);

/// Some tile index is left unwritten on some path through the body.
CheckTask encode_tightness(const LoopVc& vc, const tiler::TilePredicate& t, size_t path_limit);

/// {pre} seg {post} for a loop-free segment.
CheckTask encode_t2dstar(const Program& p, const cfg::Cfg& g, const cfg::Segment& seg,
                         const std::vector<frontend::ExprP>& assumptions,
                         const std::vector<QuantAssertion>& pre, const QuantAssertion& post);

/// Facts of q in env, instantiated at `terms` when q has one variable.
TermP assume_at(const QuantAssertion& q, const Env& env, const std::vector<TermP>& terms);

/// Negation of q in env with its variables replaced by fresh constants.
TermP refute(const QuantAssertion& q, const Env& env, const std::string& prefix,
             std::vector<TermP>* skolems = nullptr);

}  // namespace tileproof::vcgen
