// End-to-end verification of one program.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tileproof/frontend/ast.hpp"
#include "tileproof/miner/miner.hpp"
#include "tileproof/vcgen/bmc.hpp"

namespace tileproof::driver {

struct RunPlan {
  int unwind = 3;
  int rounds = 3;
  int runs = 10;
  uint64_t seed = 1;
  int64_t array_size = 8;
  int64_t value_lo = -10;
  int64_t value_hi = 10;
  std::string solver;  // empty: $TILEPROOF_SOLVER, then z3 on PATH
  int task_timeout_ms = 10'000;
  int global_timeout_ms = 900'000;
  bool strict_tiles = false;
  int workers = 0;  // 0: hardware concurrency
  size_t path_limit = 256;
  std::string dump_smt_dir;  // every query as <bench>.<kind>.<seg>.smt2
  std::string trace_out;     // mined tuples as JSON lines
  bool mine = true;
  /// Extra candidates, keyed by cut-point label ("h2").
  std::vector<std::pair<std::string, frontend::QuantAssertion>> seeds;
};

enum class Status { Verified, Violated, Inconclusive, Timeout };
const char* to_string(Status s);

/// Exit code of the CLI for a verdict.
int exit_code(Status s);

struct TileRecord {
  std::string segment;
  std::string array;
  std::string initial;
  std::string formula;
  std::string closed_form;  // empty when no interval form exists
  std::string source_form;
  bool from_reads = false;
  std::string strict;  // "pass", "fail: ...", or empty when not checked
};

struct TaskRecord {
  std::string kind;
  std::string segment;
  std::string subject;
  std::string status;  // pass, fail, unknown, timeout, error
  double time_ms = 0;
  std::string note;
};

struct Verdict {
  std::string benchmark;
  Status status = Status::Inconclusive;
  std::vector<TileRecord> tiles;
  std::vector<TaskRecord> tasks;
  std::vector<miner::CandidateInvariant> candidates;
  std::optional<vcgen::Counterexample> cex;
  int rounds = 0;
  double wall_ms = 0;
  std::vector<std::string> notes;
};

nlohmann::ordered_json to_json(const Verdict& v);

/// Throws smt::ConfigError when no solver can be found.
Verdict tiled_verify(const frontend::Program& p, const RunPlan& plan);

/// Parses, validates and verifies. Throws frontend::FrontendError.
Verdict verify_file(const std::string& path, const RunPlan& plan);

}  // namespace tileproof::driver
