#pragma once

#include <string>
#include <vector>

#include "tileproof/smt/term.hpp"

namespace tileproof::smt {

/// One-shot query: declarations are derived from the free variables of the
/// assertions and get-value terms.
struct Script {
  std::vector<std::string> comments;
  std::vector<TermP> assertions;
  bool want_model = false;  // sat-means-counterexample tasks
  std::vector<TermP> get_values;

  void add(TermP t) { assertions.push_back(std::move(t)); }
  std::string logic() const;
  std::string emit() const;
};

}  // namespace tileproof::smt
