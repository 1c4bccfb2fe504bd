// Forward symbolic execution of a loop-free CFG segment in SSA form.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/smt/term.hpp"
#include "tileproof/vcgen/lower.hpp"

namespace tileproof::vcgen {

struct SymStore {
  std::string array;
  TermP index;
  TermP pc;
};

struct SymResult {
  std::vector<TermP> defs;  // SSA definitions and division guards; always asserted
  TermP pc;                 // reaching condition of the sink
  Env out;                  // state at the sink
  std::vector<SymStore> stores;
  bool reached = false;
};

/// Runs seg from its source with every variable bound to its own name.
/// Assignments introduce `x!k`, joins introduce ite-defined variables.
/// With `only_edges` the walk is restricted to those edges (one path).
SymResult symexec(const cfg::Cfg& g, const cfg::Segment& seg, smt::FreshNames& fresh,
                  const std::set<int>* only_edges = nullptr);

/// Source-to-sink paths of seg as edge sets, tt branches first. Stops
/// after `limit + 1` paths.
std::vector<std::set<int>> enumerate_paths(const cfg::Cfg& g, const cfg::Segment& seg,
                                           size_t limit);

size_t count_paths(const cfg::Cfg& g, const cfg::Segment& seg);

/// Index terms of every select and store outside quantifiers, deduplicated.
void collect_index_terms(const TermP& t, std::vector<TermP>& out, std::set<std::string>& seen);

}  // namespace tileproof::vcgen
