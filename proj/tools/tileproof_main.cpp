// tileproof: verify array-manipulating loop programs.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/driver/driver.hpp"
#include "tileproof/frontend/parser.hpp"
#include "tileproof/smt/solver.hpp"

namespace {

constexpr int kUsageError = 3;

void print_summary(std::ostream& out, const tileproof::driver::Verdict& v, bool tiles,
                   bool candidates) {
  using tileproof::driver::to_string;
  out << v.benchmark << ": " << to_string(v.status) << " (" << static_cast<int64_t>(v.wall_ms)
            << " ms, " << v.tasks.size() << " tasks, " << v.rounds << " rounds)\n";
  if (tiles)
    for (const auto& t : v.tiles) {
      out << "  tile " << t.segment << " " << t.array << ": " << t.formula;
      if (!t.closed_form.empty()) out << "  [" << t.closed_form << "]";
      if (!t.source_form.empty()) out << "  source: " << t.source_form;
      if (!t.strict.empty()) out << "  strict: " << t.strict;
      out << "\n";
    }
  if (candidates)
    for (const auto& c : v.candidates) {
      out << "  cand " << c.cutpoint << " [" << tileproof::miner::to_string(c.status) << ", "
                << c.origin << "] " << c.text();
      if (!c.reason.empty()) out << "  -- " << c.reason;
      out << "\n";
    }
  for (const auto& t : v.tasks)
    if (t.status != "pass" && t.status != "no-cex")
      out << "  " << t.kind << " " << t.segment << " " << t.status << ": " << t.subject
                << (t.note.empty() ? "" : "  (" + t.note + ")") << "\n";
  if (v.cex) {
    out << "  counterexample:";
    for (const auto& [n, x] : v.cex->scalars) out << " " << n << "=" << x;
    for (const auto& [n, cells] : v.cex->arrays) {
      out << " " << n << "=[";
      for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << "]";
    }
    for (const auto& [n, x] : v.cex->witness) out << " fails at " << n << "=" << x;
    out << "\n";
  }
  for (const auto& n : v.notes) out << "  note: " << n << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tileproof;
  CLI::App app{"Tiled verification of loop programs over arrays"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "Verify one program");

  std::string file, json_out, cfg_out;
  driver::RunPlan plan;
  double timeout_s = plan.task_timeout_ms / 1000.0;
  double global_s = plan.global_timeout_ms / 1000.0;
  bool dump_cfg = false, dump_tiles = false, dump_cands = false;
  std::vector<std::string> seeds;

  verify->add_option("file", file, "Program source (.tla)")->required()->check(CLI::ExistingFile);
  verify->add_option("--unwind", plan.unwind, "Unrolling depth of the bounded search")
      ->check(CLI::Range(0, 64));
  verify->add_option("--rounds", plan.rounds, "Candidate refinement rounds")->check(CLI::Range(1, 100));
  verify->add_option("--runs", plan.runs, "Random runs for mining")->check(CLI::Range(1, 100000));
  verify->add_option("--seed", plan.seed, "Random seed for mining");
  verify->add_option("--array-size", plan.array_size, "Parameter value used by mining runs")
      ->check(CLI::Range(1, 4096));
  verify->add_option("--value-lo", plan.value_lo, "Smallest random input value");
  verify->add_option("--value-hi", plan.value_hi, "Largest random input value");
  verify->add_option("--solver", plan.solver, "SMT solver executable");
  verify->add_flag("--strict-tiles", plan.strict_tiles, "Run the advisory strict tile checks");
  verify->add_option("--timeout", timeout_s, "Per-query timeout in seconds")->check(CLI::PositiveNumber);
  verify->add_option("--global-timeout", global_s, "Whole-run timeout in seconds")
      ->check(CLI::PositiveNumber);
  verify->add_option("--workers", plan.workers, "Parallel solver processes (0: all cores)")
      ->check(CLI::Range(0, 256));
  verify->add_option("--path-limit", plan.path_limit, "Largest path count per loop body");
  verify->add_flag("!--no-mine", plan.mine, "Skip invariant mining");
  verify->add_option("--candidate", seeds, "Extra candidate, as LABEL:ASSERTION (e.g. h2:forall j :: ...)");
  verify->add_option("--json", json_out, "Write the JSON report here ('-' for stdout)");
  verify->add_flag("--dump-cfg", dump_cfg, "Print the control-flow graph as DOT");
  verify->add_flag("--dump-tiles", dump_tiles, "Print tiles");
  verify->add_flag("--dump-candidates", dump_cands, "Print candidate invariants");
  verify->add_option("--dump-smt", plan.dump_smt_dir, "Write every solver query to this directory");
  verify->add_option("--trace-out", plan.trace_out, "Write mining traces as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }
  plan.task_timeout_ms = std::max(1, static_cast<int>(timeout_s * 1000));
  plan.global_timeout_ms = std::max(1, static_cast<int>(global_s * 1000));
  if (plan.value_lo > plan.value_hi) {
    std::cerr << "error: --value-lo exceeds --value-hi\n";
    return kUsageError;
  }

  frontend::Program p;
  try {
    p = frontend::parse_file(file);
    for (const auto& s : seeds) {
      auto colon = s.find(':');
      if (colon == std::string::npos) throw std::runtime_error("--candidate needs LABEL:ASSERTION");
      plan.seeds.emplace_back(s.substr(0, colon), frontend::parse_assertion(s.substr(colon + 1)));
    }
  } catch (const frontend::FrontendError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << frontend::format_diagnostic(file, d) << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  if (dump_cfg) std::cout << cfg::build_cfg(p).to_dot(p.name);

  driver::Verdict v;
  try {
    v = driver::tiled_verify(p, plan);
  } catch (const smt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  print_summary(json_out == "-" ? std::cerr : std::cout, v, dump_tiles, dump_cands);
  if (!json_out.empty()) {
    std::string text = driver::to_json(v).dump(2);
    if (json_out == "-") {
      std::cout << text << "\n";
    } else {
      std::ofstream os(json_out);
      if (!os) {
        std::cerr << "error: cannot write " << json_out << "\n";
        return kUsageError;
      }
      os << text << "\n";
    }
  }
  return driver::exit_code(v.status);
}
