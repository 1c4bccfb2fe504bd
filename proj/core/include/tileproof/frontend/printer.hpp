// Source-syntax printing. Output re-parses to an equal AST.
#pragma once

#include <string>

#include "tileproof/frontend/ast.hpp"

namespace tileproof::frontend {

std::string to_string(const ExprP& e);
std::string to_string(const QuantAssertion& q);
std::string to_string(const StmtP& s, int indent = 0);
std::string to_string(const Program& p);

}  // namespace tileproof::frontend
