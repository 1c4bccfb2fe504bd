// Candidate invariants from observed loop iterations.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/exec/trace.hpp"
#include "tileproof/frontend/ast.hpp"

namespace tileproof::miner {

using frontend::ExprP;
using frontend::Program;
using frontend::QuantAssertion;

enum class RelKind { Const, Offset, Le, Lt, Ne };

/// lhs = c | lhs = rhs + c | lhs <= rhs | lhs < rhs | lhs != rhs, over
/// observed names (scalars and placeholders such as "a[i]").
struct Relation {
  RelKind kind = RelKind::Const;
  std::string lhs;
  std::string rhs;
  int64_t c = 0;
  size_t support = 0;

  std::string str() const;
};

struct TemplateSet {
  bool constants = true;
  bool offsets = true;
  bool order = true;
  bool disequality = true;
  int64_t max_offset = 8;
};

struct MinerConfig {
  TemplateSet templates;
  size_t min_support = 10;
};

/// Relations that hold in every tuple, reduced by equality classes.
std::vector<Relation> mine_relations(const std::vector<exec::TraceTuple>& tuples,
                                     const MinerConfig& cfg = {});

enum class CandStatus { Unchecked, Proven, Dropped };
const char* to_string(CandStatus s);

struct CandidateInvariant {
  int id = 0;
  std::string cutpoint;  // "h2", "E", ...
  QuantAssertion formula;
  std::string origin;    // "mined", "pre", "post", "carried"
  CandStatus status = CandStatus::Unchecked;
  std::string reason;    // why it was dropped

  std::string text() const;
};

/// What a loop observation means: the counter, its trip count and the
/// placeholder cells.
struct LoopShape {
  std::string counter;
  ExprP trip;
  std::vector<exec::Placeholder> cells;
  std::set<std::string> params;
  std::string index_var = "j";
};

/// Rewrites a per-iteration relation into a claim about the loop exit:
/// placeholders become A[j] over the cells the loop visited. nullopt when
/// the relation is filtered or cannot be lifted.
std::optional<QuantAssertion> lift(const Relation& r, const LoopShape& shape);

/// Mines every non-nested loop whose exit reaches another loop head and
/// returns lifted candidates labelled with that head.
std::vector<CandidateInvariant> mine(const Program& p, const cfg::Cfg& g,
                                     const std::vector<exec::TraceTuple>& tuples,
                                     const exec::Instrumentation& probes,
                                     const MinerConfig& cfg = {});

/// Marks `ids` as dropped with the given reason.
void drop(std::vector<CandidateInvariant>& cands, const std::vector<int>& ids,
          const std::string& reason);

}  // namespace tileproof::miner
