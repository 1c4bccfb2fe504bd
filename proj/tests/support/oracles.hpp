// Brute-force oracles: concrete execution and finite expansion.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tileproof/exec/interp.hpp"
#include "tileproof/frontend/ast.hpp"
#include "tileproof/smt/solver.hpp"
#include "tileproof/tiler/tile.hpp"

namespace tileproof::oracle {

using frontend::ExprP;
using frontend::Program;
using frontend::QuantAssertion;

/// Small integers plus every literal in the program.
std::vector<int64_t> value_domain(const Program& p);

struct SoundnessReport {
  size_t states = 0;       // completed runs with Pre true
  size_t exhaustive = 0;   // of those, from full enumeration
  size_t violations = 0;
  std::string first;       // description of the first violation
};

/// Runs p on every input of the value domain where that fits, and on random
/// inputs otherwise, with every parameter set to each size in [1, 6], until
/// at least `min_states` runs completed.
SoundnessReport concrete_soundness(const Program& p, size_t min_states = 10'000,
                                   uint64_t seed = 7);

/// Truth of the sliced target for iteration `ell`: every cell j of that
/// tile satisfying the range satisfies the body. nullopt on a failed read.
std::optional<bool> sliced(const tiler::TilePredicate& t, const QuantAssertion& target,
                           const exec::State& s, int64_t ell, int64_t window);

struct SliceReport {
  size_t t2_states = 0;  // states meeting the T2 hypothesis
  size_t t3_pairs = 0;   // (state, earlier iteration) pairs meeting the T3 hypothesis
  size_t t2_fail = 0;
  size_t t3_fail = 0;
  std::string first;
};

/// T2 and T3 of one loop by finite expansion at sizes 1..6: for every
/// sampled state before iteration ell, the hypothesis is checked concretely
/// and the body executed once.
SliceReport finite_t2_t3(const Program& p, int loop, const tiler::TilePredicate& tile,
                         const QuantAssertion& target, const std::vector<ExprP>& assumptions,
                         const std::vector<QuantAssertion>& inv, size_t samples_per_size = 1500,
                         uint64_t seed = 11);

/// One randomly generated loop with affine stores A[a*l + b].
struct TileCase {
  std::string name;
  std::string source;
  std::vector<std::string> exprs;  // store indices as written
  int64_t nmax = 8;                // the program assumes N <= nmax
};

std::vector<TileCase> tile_corpus(size_t count, uint64_t seed);

/// tau[n][ell][j + kWindow] for N = n (index 0 unused), ell < 8, |j| < 40.
/// trip[n] is 0 when N = n violates the program's global assumptions.
constexpr int64_t kWindow = 40;
constexpr int64_t kMaxEll = 8;
struct TileTable {
  std::vector<std::vector<std::vector<char>>> tau;
  std::vector<int64_t> trip;  // per N
  bool at(int64_t n, int64_t ell, int64_t j) const;
};

TileTable tabulate(const Program& p, const ExprP& tile_formula, const std::string& ell,
                   const std::string& j, int64_t nmax);

/// T1 by enumeration: true when every Phi cell of A lies in some tile and
/// every tile cell lies in A, for all N in [1, nmax] with trip >= 1.
bool brute_t1(const Program& p, const TileTable& tab, const QuantAssertion& target, int64_t nmax);

struct BruteStrict {
  bool disjoint = true;
  bool range_like = true;
  bool compact = true;
};
BruteStrict brute_strict(const TileTable& tab, int64_t nmax);

/// Expected interval: all expressions share their slope and symbolic part,
/// and their offsets are consecutive. Returns the offsets' span (count)
/// when so.
bool brute_consecutive(const Program& p, const std::vector<ExprP>& exprs, const std::string& ell,
                       int64_t nmax);

}  // namespace tileproof::oracle
