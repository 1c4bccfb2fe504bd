#pragma once

#include <optional>
#include <string>

#include "tileproof/frontend/ast.hpp"

namespace tileproof::frontend {

/// for (var := init; cond; step) body, with trip_count iterations at most,
/// becomes
///   for (counter := 0; counter < trip_count; counter := counter + 1) {
///     if (counter == 0) { var := init; }
///     if (cond) { body; step; }
///   }
StmtP desugar_general_loop(const std::string& var, const ExprP& init,
                           const ExprP& cond, const StmtP& step,
                           const ExprP& trip_count, const StmtP& body,
                           const std::string& counter);

/// Unit-step loops over var in either direction become the restricted form
/// with var itself as the 0-based counter. Returns nullopt when the header
/// is not of that shape.
std::optional<StmtP> normalize_counted_loop(const std::string& var,
                                            const ExprP& init,
                                            const ExprP& cond, int64_t step,
                                            const StmtP& body, SrcLoc loc);

}  // namespace tileproof::frontend
