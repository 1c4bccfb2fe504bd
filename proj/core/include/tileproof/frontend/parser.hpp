// Parser for .tla sources.
//
// Loops are lowered while parsing: unit-step counted loops become the
// restricted 0-based form, anything else needs a `bound E` clause and goes
// through desugar_general_loop.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tileproof/frontend/ast.hpp"

namespace tileproof::frontend {

struct Diagnostic {
  SrcLoc loc;
  std::string message;
  bool warning = false;
};

std::string format_diagnostic(const std::string& file, const Diagnostic& d);

class FrontendError : public std::runtime_error {
 public:
  explicit FrontendError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Parses and validates. Throws FrontendError on syntax or validation errors.
Program parse(const std::string& source);
Program parse_file(const std::string& path);

/// Parses without running the validator (for mutant tests).
Program parse_unchecked(const std::string& source);

ExprP parse_expr(const std::string& text);
QuantAssertion parse_assertion(const std::string& text);

}  // namespace tileproof::frontend
