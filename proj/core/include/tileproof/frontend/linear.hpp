// Linear normal forms for integer expressions. Non-linear subterms
// (products of variables, division, modulo, array reads) become atoms.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "tileproof/frontend/ast.hpp"

namespace tileproof::frontend {

/// Euclidean division and remainder (remainder always non-negative).
int64_t ediv(int64_t a, int64_t b);
int64_t emod(int64_t a, int64_t b);

struct Linear {
  // atom text -> (coefficient, atom expression)
  std::map<std::string, std::pair<int64_t, ExprP>> terms;
  int64_t constant = 0;

  bool is_constant() const { return terms.empty(); }
};

Linear linearize(const ExprP& e);
ExprP from_linear(const Linear& l);

/// Canonical form: integer subterms are rewritten through Linear, boolean
/// connectives have constants folded.
ExprP normalize(const ExprP& e);

/// e == coeff * var + rest, rest free of var.
struct Affine {
  int64_t coeff = 0;
  Linear rest;
};

std::optional<Affine> affine_in(const ExprP& e, const std::string& var);

}  // namespace tileproof::frontend
