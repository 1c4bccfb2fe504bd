// Minimal S-expression reader for solver output.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tileproof/smt/term.hpp"

namespace tileproof::smt {

struct SExpr {
  bool atom = true;
  std::string text;
  std::vector<SExpr> items;

  bool is(const std::string& s) const { return atom && text == s; }
  std::string str() const;
};

class SExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<SExpr> parse_sexprs(const std::string& text);

/// Reads back a term in the fragment emit() produces. Variables get their
/// sort from env (Int when absent).
TermP to_term(const SExpr& s, const std::map<std::string, Sort>& env = {});

}  // namespace tileproof::smt
