// Tiles: which array cells one loop iteration is responsible for.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/frontend/ast.hpp"
#include "tileproof/frontend/linear.hpp"
#include "tileproof/smt/solver.hpp"

namespace tileproof::tiler {

using frontend::ExprP;

enum class CheckStatus { Pass, Fail, Unknown };
const char* to_string(CheckStatus s);

/// One index expression, in terms of the iteration-start state.
struct AccessExpr {
  std::string array;
  ExprP expr;
  bool opaque = false;  // depends on an array the loop writes
  bool unstable = false;  // depends on a scalar the loop writes (not the counter)
};

struct Accesses {
  std::vector<AccessExpr> writes;  // syntactic path order, deduplicated per array
  std::vector<AccessExpr> reads;
  size_t paths = 0;
  bool path_limit_hit = false;
};

/// Enumerates the paths of a closing segment and collects store and read
/// indices after substituting earlier assignments on the same path.
Accesses collect_accesses(const cfg::Cfg& g, const cfg::Segment& seg, size_t path_limit = 256);

/// lo <= j < hi
struct Interval {
  ExprP lo;
  ExprP hi;
};

struct TilePredicate {
  std::string array;
  std::string ell;      // loop counter
  std::string j = "j";  // index variable
  std::vector<ExprP> init_exprs;  // every update index (the initial tile)
  std::vector<ExprP> exprs;       // survivors of overlap refinement
  std::vector<std::optional<frontend::Affine>> affine;  // per survivor, in ell
  std::optional<Interval> closed_form;
  std::optional<Interval> init_closed_form;
  bool from_reads = false;

  /// j == e1 || j == e2 || ...
  ExprP formula() const;
  ExprP init_formula() const;
  /// formula() with ell and j replaced.
  ExprP at(const ExprP& ell_val, const ExprP& j_val, bool initial = false) const;
  /// Closed form when available, else the disjunction.
  ExprP display() const;
  ExprP display_init() const;
};

enum class TileStatus { Ok, NoTile, Opaque, PathLimit };
const char* to_string(TileStatus s);

struct TileResult {
  TileStatus status = TileStatus::NoTile;
  std::optional<TilePredicate> tile;
  std::string reason;
  std::vector<ExprP> removed;  // dropped by the overlap check
};

struct TileContext {
  const cfg::Cfg* g = nullptr;
  const cfg::Segment* seg = nullptr;
  std::vector<ExprP> assumptions;  // global facts (params >= 1, ...)
  smt::QueryFn query;              // may be empty: no refinement
  size_t path_limit = 256;
  std::string j = "j";
};

/// Initial tile from the update (or, with from_reads, read) indices of
/// `array`, then drops every index some later iteration also covers.
TileResult find_heuristic_tile(const TileContext& ctx, const std::string& array,
                               bool from_reads = false);

/// Same refinement over a caller-supplied index list.
TileResult tile_from_exprs(const TileContext& ctx, const std::string& array,
                           const std::vector<ExprP>& exprs, bool from_reads = false);

/// Interval form when the expressions share a coefficient of `ell` and a
/// symbolic remainder, and their constant offsets are consecutive.
std::optional<Interval> simplify(const std::vector<ExprP>& exprs, const std::string& ell);

ExprP interval_formula(const Interval& iv, const std::string& j);

/// Solver check that the closed form and the disjunction agree for all ell, j.
CheckStatus check_closed_form(const TilePredicate& t, const std::vector<ExprP>& assumptions,
                              const smt::QueryFn& query);

struct StrictReport {
  CheckStatus disjoint = CheckStatus::Unknown;
  CheckStatus range_like = CheckStatus::Unknown;
  CheckStatus compact = CheckStatus::Unknown;

  bool pass() const {
    return disjoint == CheckStatus::Pass && range_like == CheckStatus::Pass &&
           compact == CheckStatus::Pass;
  }
};

/// Disjointness across iterations, interval shape within one iteration and
/// no gaps between neighbouring iterations, each for 0 <= ell < trip.
StrictReport strict_validate(const TilePredicate& t, const ExprP& trip,
                             const std::vector<ExprP>& assumptions, const smt::QueryFn& query);

/// Tile in terms of the source loop variable (undoes counter normalization).
ExprP source_form(const ExprP& tile_formula, const std::string& ell,
                  const frontend::LoopOrigin& origin);

}  // namespace tileproof::tiler
