#pragma once

#include <vector>

#include "tileproof/frontend/ast.hpp"
#include "tileproof/frontend/parser.hpp"

namespace tileproof::frontend {

/// Checks declarations, typing, the loop-counter discipline and trip-count
/// independence. Warnings (constant division by zero) are returned with
/// warning=true and do not make the program invalid.
std::vector<Diagnostic> validate(const Program& p);

bool has_errors(const std::vector<Diagnostic>& ds);

}  // namespace tileproof::frontend
