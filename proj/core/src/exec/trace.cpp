#include "tileproof/exec/trace.hpp"

#include <algorithm>
#include <ostream>

#include <nlohmann/json.hpp>

#include "tileproof/frontend/printer.hpp"

namespace tileproof::exec {

using namespace frontend;

namespace {

void stores_in(const StmtP& s, std::vector<std::pair<std::string, ExprP>>& out) {
  switch (s->kind) {
    case StmtKind::Store: out.emplace_back(s->var, s->index); return;
    case StmtKind::If:
    case StmtKind::Seq:
      for (const auto& c : s->children) stores_in(c, out);
      return;
    default: return;  // nested loops are probed on their own
  }
}

class Recorder : public Observer {
 public:
  Recorder(const Program& p, const Instrumentation& probes, int run,
           std::vector<TraceTuple>& out)
      : p_(p), probes_(probes), run_(run), out_(out) {
    auto loops = loops_preorder(p.body);
    for (const auto& l : loops) counters_.push_back(l->var);
  }

  void iteration_end(int loop, int64_t counter, const State& start, const State& now) override {
    auto it = probes_.find(loop);
    if (it == probes_.end()) return;
    TraceTuple t;
    t.cutpoint = it->second.cutpoint;
    t.loop = loop;
    t.iteration = counter;
    t.run = run_;
    std::map<std::string, int64_t> vals;
    const std::string& own = counters_[static_cast<size_t>(loop)];
    vals[own] = counter;
    for (const auto& [n, v] : now.scalars) {
      if (p_.loop_counters.count(n)) continue;
      vals[n] = v;
    }
    for (const auto& ph : it->second.cells) {
      try {
        int64_t i = eval_int(ph.index, start);
        const auto& arr = now.arrays.at(ph.array);
        if (i < 0 || i >= static_cast<int64_t>(arr.size())) continue;
        vals[ph.name] = arr[static_cast<size_t>(i)];
      } catch (const RunError&) {
        continue;
      }
    }
    t.values.assign(vals.begin(), vals.end());
    pending_.push_back(std::move(t));
  }

  void commit() {
    for (auto& t : pending_) out_.push_back(std::move(t));
    pending_.clear();
  }
  void discard() { pending_.clear(); }

 private:
  const Program& p_;
  const Instrumentation& probes_;
  int run_;
  std::vector<TraceTuple>& out_;
  std::vector<TraceTuple> pending_;
  std::vector<std::string> counters_;
};

}  // namespace

Instrumentation default_instrumentation(const Program& p) {
  Instrumentation ins;
  auto loops = loops_preorder(p.body);
  for (size_t k = 0; k < loops.size(); ++k) {
    LoopProbe probe;
    probe.cutpoint = "h" + std::to_string(k + 1);
    std::vector<std::pair<std::string, ExprP>> st;
    stores_in(loops[k]->children[0], st);
    std::set<std::string> seen;
    for (const auto& [a, idx] : st) {
      for (const auto& decl : p.arrays) {
        std::string name = decl.name + "[" + to_string(idx) + "]";
        if (!seen.insert(name).second) continue;
        probe.cells.push_back({name, decl.name, idx});
      }
    }
    ins[static_cast<int>(k)] = std::move(probe);
  }
  return ins;
}

State random_state(const Program& p, const RunConfig& cfg, std::mt19937_64& rng) {
  std::map<std::string, int64_t> params;
  for (const auto& n : p.params) {
    auto it = cfg.fixed.find(n);
    params[n] = it == cfg.fixed.end() ? cfg.array_size : it->second;
  }
  State s = make_state(p, params);
  std::uniform_int_distribution<int64_t> dist(cfg.value_lo, cfg.value_hi);
  for (const auto& n : p.scalars) s.scalars[n] = dist(rng);
  for (auto& [n, arr] : s.arrays)
    for (auto& c : arr) c = dist(rng);
  for (const auto& [n, v] : cfg.fixed)
    if (s.scalars.count(n)) s.scalars[n] = v;
  return s;
}

std::vector<TraceTuple> run_random(const Program& p, const RunConfig& cfg) {
  return run_random(p, cfg, default_instrumentation(p));
}

std::vector<TraceTuple> run_random(const Program& p, const RunConfig& cfg,
                                   const Instrumentation& probes) {
  std::vector<TraceTuple> out;
  if (loops_preorder(p.body).empty()) return out;
  std::mt19937_64 rng(cfg.seed);
  for (int run = 0; run < cfg.runs; ++run) {
    bool accepted = false;
    for (int attempt = 0; attempt <= cfg.max_retries && !accepted; ++attempt) {
      State s;
      try {
        s = random_state(p, cfg, rng);
        if (!eval_assertion(p, p.pre, s)) continue;
      } catch (const RunError&) {
        continue;
      }
      Recorder rec(p, probes, run, out);
      if (execute(p, s, &rec) == Outcome::Ok) {
        rec.commit();
        accepted = true;
      }
    }
    if (!accepted)
      throw MiningUnavailable("run " + std::to_string(run) + " rejected after " +
                              std::to_string(cfg.max_retries + 1) + " attempts");
  }
  return out;
}

void write_jsonl(std::ostream& os, const std::vector<TraceTuple>& tuples) {
  for (const auto& t : tuples) {
    nlohmann::ordered_json j;
    j["cutpoint"] = t.cutpoint;
    j["run"] = t.run;
    j["iteration"] = t.iteration;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const auto& [n, v] : t.values) vals[n] = v;
    j["values"] = vals;
    os << j.dump() << '\n';
  }
}

}  // namespace tileproof::exec
