// External SMT solver driven over stdio, one process per query.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "tileproof/smt/model.hpp"
#include "tileproof/smt/script.hpp"

namespace tileproof::smt {

enum class Status { Sat, Unsat, Unknown, Timeout, Crash };

const char* to_string(Status s);

struct SolverResult {
  Status status = Status::Unknown;
  std::optional<Model> model;  // only when status == Sat
  double wall_ms = 0;
  int exit_code = 0;
  std::string output;
  std::string errors;  // stderr, kept for crash diagnostics
};

/// Runs one script. `tag` names the query for dumps and logs, e.g.
/// "overlap" or "T2*".
using QueryFn = std::function<SolverResult(const Script&, const std::string& tag)>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Solver {
 public:
  /// Resolves `requested` (or $TILEPROOF_SOLVER, or "z3") to an executable
  /// path. Throws ConfigError when nothing runnable is found.
  static std::string resolve(const std::string& requested = "");

  explicit Solver(std::string path, std::string args = "-in");

  const std::string& path() const { return path_; }

  /// Thread-safe; each call owns its child process.
  SolverResult check(const std::string& script, int timeout_ms) const;

 private:
  std::string path_;
  std::string args_;
};

}  // namespace tileproof::smt
