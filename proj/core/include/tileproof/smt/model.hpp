// Solver models and an evaluator for the quantifier-free fragment.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tileproof/smt/sexpr.hpp"
#include "tileproof/smt/term.hpp"

namespace tileproof::smt {

struct ArrayValue {
  int64_t fallback = 0;
  std::map<int64_t, int64_t> entries;

  int64_t at(int64_t i) const {
    auto it = entries.find(i);
    return it == entries.end() ? fallback : it->second;
  }
};

struct Value {
  Sort sort = Sort::Int;
  int64_t scalar = 0;  // Int, or 0/1 for Bool
  ArrayValue array;
};

struct Model {
  std::map<std::string, Value> values;
  std::map<std::string, int64_t> get_values;  // emitted term -> integer value

  bool has(const std::string& n) const { return values.count(n) != 0; }
  int64_t int_value(const std::string& n, int64_t dflt = 0) const;
  ArrayValue array_value(const std::string& n) const;
};

/// Parses `(model ...)` or the bare list form of `(get-model)` output.
/// Definitions the reader does not understand are skipped.
Model parse_model(const SExpr& s);

/// Parses a `(get-value ...)` answer into m.get_values.
void parse_get_value(const SExpr& s, Model& m);

/// nullopt on quantifiers or division by zero. Unbound variables read as 0.
std::optional<Value> eval(const TermP& t, const Model& m);
std::optional<bool> eval_bool(const TermP& t, const Model& m);

}  // namespace tileproof::smt
