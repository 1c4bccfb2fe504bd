// Translation of source expressions into solver terms.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tileproof/frontend/ast.hpp"
#include "tileproof/smt/term.hpp"

namespace tileproof::vcgen {

using frontend::ExprP;
using smt::TermP;

/// Maps names to their current terms. Names missing from both maps become
/// free variables of the same name.
struct Env {
  std::map<std::string, TermP> scalars;
  std::map<std::string, TermP> arrays;

  TermP scalar(const std::string& n) const;
  TermP array(const std::string& n) const;
};

/// Lowers e under env. Non-constant divisors append `divisor != 0` to
/// guards when guards is non-null.
TermP lower(const ExprP& e, const Env& env, std::vector<TermP>* guards = nullptr);

/// Lowers with every name free.
TermP lower(const ExprP& e);

/// Facts that hold in every state: params are positive, plus the top-level
/// assumes that precede the first loop and mention only names the program
/// never writes.
std::vector<ExprP> global_assumptions(const frontend::Program& p);

std::vector<TermP> lower_all(const std::vector<ExprP>& es);

}  // namespace tileproof::vcgen
