#include "tileproof/driver/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "tileproof/cfg/cfg.hpp"
#include "tileproof/exec/trace.hpp"
#include "tileproof/frontend/parser.hpp"
#include "tileproof/frontend/printer.hpp"
#include "tileproof/smt/solver.hpp"
#include "tileproof/tiler/tile.hpp"
#include "tileproof/vcgen/lower.hpp"
#include "tileproof/vcgen/vc.hpp"

namespace tileproof::driver {

using Clock = std::chrono::steady_clock;
using frontend::Program;
using frontend::QuantAssertion;
using miner::CandidateInvariant;
using miner::CandStatus;
using vcgen::CheckTask;

const char* to_string(Status s) {
  switch (s) {
    case Status::Verified: return "Verified";
    case Status::Violated: return "Violated";
    case Status::Inconclusive: return "Inconclusive";
    case Status::Timeout: return "Timeout";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Verified: return 0;
    case Status::Violated: return 1;
    default: return 2;
  }
}

namespace {

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

/// Cap for the quantified attempt when a quantifier-free variant exists.
constexpr int kQuantifiedCapMs = 500;

class QueryRunner {
 public:
  QueryRunner(const RunPlan& plan, std::string bench, Clock::time_point deadline)
      : plan_(plan), bench_(std::move(bench)), deadline_(deadline),
        solver_(smt::Solver::resolve(plan.solver)) {
    if (!plan.dump_smt_dir.empty()) std::filesystem::create_directories(plan.dump_smt_dir);
  }

  smt::SolverResult run(const smt::Script& s, const std::string& tag, int timeout_ms,
                        bool write_dump = true) {
    std::string text = s.emit();
    if (write_dump) dump(text, tag);
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = cache_.find(text);
      if (it != cache_.end()) return it->second;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline_ - Clock::now()).count();
    if (left <= 0) {
      expired_ = true;
      smt::SolverResult r;
      r.status = smt::Status::Timeout;
      return r;
    }
    smt::SolverResult r = solver_.check(text, static_cast<int>(std::min<int64_t>(timeout_ms, left)));
    if (r.status == smt::Status::Timeout && Clock::now() >= deadline_) expired_ = true;
    if (r.status != smt::Status::Timeout && r.status != smt::Status::Crash) {
      std::lock_guard<std::mutex> lk(mu_);
      cache_.emplace(text, r);
    }
    return r;
  }

  smt::QueryFn fn(const std::string& segment, const std::string& prefix = "") {
    return [this, segment, prefix](const smt::Script& s, const std::string& tag) {
      return run(s, prefix + tag + "." + segment, plan_.task_timeout_ms);
    };
  }

  bool expired() const { return expired_; }

  void dump(const std::string& text, const std::string& tag) {
    if (plan_.dump_smt_dir.empty()) return;
    std::string base;
    {
      std::lock_guard<std::mutex> lk(mu_);
      int n = ++dump_count_[tag];
      base = bench_ + "." + tag + (n > 1 ? "_" + std::to_string(n) : "");
    }
    std::ofstream(std::filesystem::path(plan_.dump_smt_dir) / (base + ".smt2")) << text;
  }

 private:
  const RunPlan& plan_;
  std::string bench_;
  Clock::time_point deadline_;
  smt::Solver solver_;
  std::mutex mu_;
  std::map<std::string, smt::SolverResult> cache_;
  std::map<std::string, int> dump_count_;
  std::atomic<bool> expired_{false};
};

struct Outcome {
  std::string status;  // pass, fail, unknown, timeout, error
  double ms = 0;
  std::string note;
  std::optional<smt::Model> model;
};

std::string status_of(smt::Status s) {
  switch (s) {
    case smt::Status::Unsat: return "pass";
    case smt::Status::Sat: return "fail";
    case smt::Status::Unknown: return "unknown";
    case smt::Status::Timeout: return "timeout";
    case smt::Status::Crash: return "error";
  }
  return "error";
}

std::string tag_of(const CheckTask& t) {
  return std::string(vcgen::file_tag(t.kind)) + "." + t.segment;
}

Outcome discharge(QueryRunner& q, const CheckTask& t, const RunPlan& plan, bool dumped = false) {
  Outcome o;
  if (t.refuted) {
    o.status = "fail";
    o.note = *t.refuted;
    return o;
  }
  std::string tag = tag_of(t);
  int to = t.fallback ? std::min(plan.task_timeout_ms, kQuantifiedCapMs) : plan.task_timeout_ms;
  smt::SolverResult r = q.run(t.script, tag, to, !dumped);
  o.ms = r.wall_ms;
  o.status = status_of(r.status);
  if ((r.status == smt::Status::Unknown || r.status == smt::Status::Timeout) && t.fallback) {
    smt::SolverResult r2 = q.run(*t.fallback, tag, plan.task_timeout_ms, !dumped);
    o.ms += r2.wall_ms;
    o.status = status_of(r2.status);
    o.note = "quantifier-free variant";
    r = std::move(r2);
  }
  if (r.status == smt::Status::Crash) o.note = r.errors.substr(0, 200);
  o.model = std::move(r.model);
  return o;
}

std::vector<Outcome> discharge_all(QueryRunner& q, const std::vector<CheckTask>& tasks,
                                   const RunPlan& plan) {
  std::vector<Outcome> out(tasks.size());
  if (tasks.empty()) return out;
  // Dump names are numbered in task order, before any thread runs.
  for (const auto& t : tasks) {
    if (t.refuted) continue;
    q.dump(t.script.emit(), tag_of(t));
    if (t.fallback) q.dump(t.fallback->emit(), tag_of(t));
  }
  size_t workers = plan.workers > 0 ? static_cast<size_t>(plan.workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, tasks.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next++) < tasks.size();) out[i] = discharge(q, tasks[i], plan, true);
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

bool trivial(const QuantAssertion& q) {
  return q.body->op == frontend::Op::Bool && q.body->value != 0;
}

std::string text_of(const QuantAssertion& q) { return frontend::to_string(q); }

struct TileKey {
  int loop;
  std::string array;
  bool reads;
  auto operator<=>(const TileKey&) const = default;
};

class Verifier {
 public:
  Verifier(const Program& p, const RunPlan& plan, Verdict& v)
      : p_(p), plan_(plan), v_(v), t0_(Clock::now()),
        q_(plan, p.name, t0_ + std::chrono::milliseconds(plan.global_timeout_ms)),
        g_(cfg::build_cfg(p)), segs_(cfg::segments(g_)), G_(vcgen::global_assumptions(p)) {}

  void run() {
    if (bounded_search()) return;
    for (const auto& l : g_.loops())
      if (l.parent >= 0) {
        v_.notes.push_back("nested loops are only checked up to the unwinding bound");
        v_.status = Status::Inconclusive;
        return;
      }
    collect_candidates();
    std::vector<int> order;
    for (int h : g_.cutpoints()) order.push_back(h);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g_.topo_rank(a) < g_.topo_rank(b); });
    order.push_back(g_.end());
    facts_[g_.start()] = {p_.pre};
    bool post_ok = true;
    for (int c : order) {
      post_ok = prove_at(c) && post_ok;
      if (t1_blocked_) break;
    }
    v_.status = post_ok ? Status::Verified : Status::Inconclusive;
    if (!post_ok && q_.expired()) v_.status = Status::Timeout;
  }

  double elapsed() const { return ms_since(t0_); }

 private:
  void record(const CheckTask& t, const Outcome& o) {
    v_.tasks.push_back({vcgen::to_string(t.kind), t.segment, t.subject, o.status, o.ms, o.note});
  }

  bool bounded_search() {
    vcgen::BmcConfig bc;
    bc.unwind = plan_.unwind;
    CheckTask t = vcgen::encode_bmc(p_, bc);
    Outcome o = discharge(q_, t, plan_);
    // For the bounded search a model is the interesting outcome.
    Outcome shown = o;
    if (o.status == "pass") shown.status = "no-cex";
    if (o.status == "fail") shown.status = "cex";
    if (o.status == "fail" && o.model) {
      if (auto cex = vcgen::replay(p_, *o.model, bc)) {
        record(t, shown);
        v_.cex = cex;
        v_.status = Status::Violated;
        return true;
      }
      shown.status = "spurious";
      shown.note = "model did not replay concretely";
    }
    record(t, shown);
    return false;
  }

  int exit_target(const cfg::Loop& l) const {
    for (const auto& s : segs_)
      if (s.source == l.head && !s.closes_loop) return s.target;
    return -1;
  }

  const cfg::Segment* body_of(int loop) const {
    for (const auto& s : segs_)
      if (s.closes_loop && s.loop == loop && s.source == g_.loops()[loop].head) return &s;
    return nullptr;
  }

  void add_candidate(int node, QuantAssertion q, const std::string& origin) {
    CandidateInvariant c;
    c.cutpoint = g_.cut_label(node);
    c.formula = std::move(q);
    c.origin = origin;
    for (const auto& o : v_.candidates)
      if (o.cutpoint == c.cutpoint && o.text() == c.text()) return;
    c.id = static_cast<int>(v_.candidates.size());
    v_.candidates.push_back(std::move(c));
  }

  int node_of_label(const std::string& label) const {
    if (label == "E") return g_.end();
    for (int h : g_.cutpoints())
      if (g_.cut_label(h) == label) return h;
    return -1;
  }

  void collect_candidates() {
    bool feeds_head = false;
    for (const auto& l : g_.loops()) {
      int t = exit_target(l);
      feeds_head = feeds_head || (t >= 0 && t != g_.end());
    }
    if (plan_.mine && feeds_head) {
      exec::RunConfig rc;
      rc.array_size = plan_.array_size;
      rc.runs = plan_.runs;
      rc.seed = plan_.seed;
      rc.value_lo = plan_.value_lo;
      rc.value_hi = plan_.value_hi;
      auto probes = exec::default_instrumentation(p_);
      try {
        auto tuples = exec::run_random(p_, rc, probes);
        if (!plan_.trace_out.empty()) {
          std::ofstream os(plan_.trace_out);
          exec::write_jsonl(os, tuples);
        }
        for (auto& c : miner::mine(p_, g_, tuples, probes))
          add_candidate(node_of_label(c.cutpoint), c.formula, "mined");
      } catch (const exec::MiningUnavailable& e) {
        v_.notes.push_back(std::string("mining unavailable: ") + e.what());
      }
    }
    for (const auto& [label, q] : plan_.seeds) {
      int n = node_of_label(label);
      if (n < 0 || n == g_.end()) {
        v_.notes.push_back("seed for unknown cut-point " + label + " ignored");
        continue;
      }
      add_candidate(n, q, "seed");
    }
    if (!trivial(p_.pre))
      for (const auto& s : segs_)
        if (s.source == g_.start() && s.target != g_.end()) add_candidate(s.target, p_.pre, "pre");
    // Whatever is expected at a head is also proposed after its loop.
    for (const auto& l : g_.loops()) {
      int t = exit_target(l);
      if (t < 0 || t == g_.end()) continue;
      std::string from = g_.cut_label(l.head);
      std::vector<QuantAssertion> carry;
      for (const auto& c : v_.candidates)
        if (c.cutpoint == from) carry.push_back(c.formula);
      for (auto& q : carry) add_candidate(t, q, "carried");
    }
    add_candidate(g_.end(), p_.post, "post");
  }

  const tiler::TileResult& tile_for(int loop, const std::string& array, bool reads) {
    TileKey key{loop, array, reads};
    auto it = tiles_.find(key);
    if (it != tiles_.end()) return it->second;
    const cfg::Segment* body = body_of(loop);
    tiler::TileContext ctx{&g_, body, G_, q_.fn(body->file_label()), plan_.path_limit,
                           p_.is_scalar("j") ? "j_" : "j"};
    tiler::TileResult r = tiler::find_heuristic_tile(ctx, array, reads);
    TileRecord rec;
    rec.segment = body->label;
    rec.array = array;
    rec.from_reads = reads;
    if (r.tile) {
      const auto& t = *r.tile;
      rec.initial = frontend::to_string(t.display_init());
      rec.formula = frontend::to_string(t.formula());
      if (t.closed_form) rec.closed_form = frontend::to_string(tiler::interval_formula(*t.closed_form, t.j));
      const cfg::Loop& l = g_.loops()[loop];
      if (l.stmt)
        rec.source_form = frontend::to_string(tiler::source_form(t.display(), t.ell, l.stmt->origin));
      if (plan_.strict_tiles) {
        auto t0 = Clock::now();
        auto sr = tiler::strict_validate(t, l.trip, G_, q_.fn(body->file_label(), "STRICT-"));
        double ms = ms_since(t0) / 3;
        rec.strict = sr.pass() ? "pass"
                               : std::string("fail: disjoint ") + tiler::to_string(sr.disjoint) +
                                     ", range-like " + tiler::to_string(sr.range_like) +
                                     ", compact " + tiler::to_string(sr.compact);
        for (auto [name, st] : {std::pair{"disjoint", sr.disjoint}, {"range-like", sr.range_like},
                                {"compact", sr.compact}}) {
          v_.tasks.push_back({vcgen::to_string(vcgen::TaskKind::Strict), body->file_label(),
                              array + ": " + name, tiler::to_string(st), ms, "advisory"});
        }
        vcgen::LoopVc vc{&p_, &g_, body, G_, {}};
        CheckTask tt = vcgen::encode_tightness(vc, t, plan_.path_limit);
        Outcome o = discharge(q_, tt, plan_);
        o.note = o.status == "pass" ? "advisory" : "advisory: some path skips a tile cell";
        record(tt, o);
      }
    } else {
      rec.formula = std::string("(") + tiler::to_string(r.status) + ") " + r.reason;
    }
    v_.tiles.push_back(rec);
    return tiles_.emplace(key, std::move(r)).first->second;
  }

  /// First array read in the target body that the loop writes; failing that,
  /// the first array it reads at all.
  std::optional<std::pair<std::string, bool>> tile_array(const QuantAssertion& t,
                                                          const std::set<std::string>& written) {
    std::vector<std::pair<std::string, frontend::ExprP>> reads;
    frontend::collect_reads(t.body, reads);
    for (const auto& [a, idx] : reads)
      if (written.count(a)) return std::make_pair(a, false);
    if (!reads.empty()) return std::make_pair(reads.front().first, true);
    return std::nullopt;
  }

  void loop_tasks(int loop, const QuantAssertion& target, int cand,
                  std::vector<CheckTask>& tasks, std::vector<int>& owner) {
    const cfg::Segment* body = body_of(loop);
    std::set<std::string> ws, wa;
    vcgen::loop_write_set(g_, loop, ws, wa);
    auto fail = [&](const std::string& why) {
      CheckTask t;
      t.kind = vcgen::TaskKind::T1;
      t.segment = body->file_label();
      t.subject = text_of(target);
      t.refuted = why;
      tasks.push_back(t);
      owner.push_back(cand);
    };
    if (target.vars.empty()) return fail("scalar target on variables the loop writes");
    auto choice = tile_array(target, wa);
    if (!choice) return fail("target reads no array to tile");
    const tiler::TileResult& tr = tile_for(loop, choice->first, choice->second);
    if (!tr.tile) return fail("no tile for " + choice->first + ": " + tr.reason);
    int head = g_.loops()[loop].head;
    vcgen::LoopVc vc{&p_, &g_, body, G_, {}};
    for (const auto& f : facts_[head])
      if (!vcgen::mentions_any(f, ws, wa)) vc.inv.push_back(f);
    for (auto t : {vcgen::encode_t1(vc, *tr.tile, target), vcgen::encode_t2star(vc, *tr.tile, target),
                   vcgen::encode_t3star(vc, *tr.tile, target),
                   vcgen::encode_zero_trip(vc, facts_[head], target)}) {
      tasks.push_back(std::move(t));
      owner.push_back(cand);
    }
  }

  /// Proves the candidates at cut-point c; returns false when a candidate at
  /// End (the postcondition) could not be proven.
  bool prove_at(int c) {
    std::vector<const cfg::Segment*> incoming;
    for (const auto& s : segs_)
      if (!s.closes_loop && s.sink == c) incoming.push_back(&s);
    std::string label = g_.cut_label(c);
    for (int round = 1; round <= plan_.rounds; ++round) {
      v_.rounds = std::max(v_.rounds, round);
      std::vector<int> active;
      for (const auto& cand : v_.candidates)
        if (cand.cutpoint == label && cand.status != CandStatus::Dropped) active.push_back(cand.id);
      if (active.empty()) return true;
      std::vector<CheckTask> tasks;
      std::vector<int> owner;
      for (const cfg::Segment* s : incoming) {
        std::vector<QuantAssertion> pre;
        if (s->source == g_.start()) {
          pre = facts_[g_.start()];
        } else {
          int loop = g_.loop_of_head(s->source);
          std::set<std::string> ws, wa;
          vcgen::loop_write_set(g_, loop, ws, wa);
          for (const auto& f : facts_[s->source])
            if (!vcgen::mentions_any(f, ws, wa)) pre.push_back(f);
          // Targets are assumed here; any failure forces another round
          // without them.
          for (int id : active) {
            const auto& f = v_.candidates[id].formula;
            if (!vcgen::mentions_any(f, ws, wa)) continue;
            pre.push_back(f);
            loop_tasks(loop, f, id, tasks, owner);
          }
        }
        for (int id : active) {
          tasks.push_back(vcgen::encode_t2dstar(p_, g_, *s, G_, pre, v_.candidates[id].formula));
          owner.push_back(id);
        }
      }
      // T1 goes first; a range gap cannot be repaired by dropping candidates.
      std::vector<CheckTask> gate, rest;
      std::vector<size_t> gate_at, rest_at;
      for (size_t i = 0; i < tasks.size(); ++i) {
        bool g = tasks[i].kind == vcgen::TaskKind::T1 && !tasks[i].refuted;
        (g ? gate : rest).push_back(tasks[i]);
        (g ? gate_at : rest_at).push_back(i);
      }
      std::vector<Outcome> outs(tasks.size());
      auto gate_outs = discharge_all(q_, gate, plan_);
      for (size_t k = 0; k < gate.size(); ++k) outs[gate_at[k]] = gate_outs[k];
      for (size_t k = 0; k < gate.size(); ++k) {
        if (gate_outs[k].status == "pass") continue;
        for (size_t i : gate_at) record(tasks[i], outs[i]);
        v_.candidates[owner[gate_at[k]]].reason = "T1 " + gate_outs[k].status;
        v_.notes.push_back("T1 " + gate_outs[k].status + " on " + gate[k].segment + " for " +
                           gate[k].subject + "; no alternative tile, so the verdict is inconclusive");
        t1_blocked_ = true;
        return false;
      }
      auto rest_outs = discharge_all(q_, rest, plan_);
      for (size_t k = 0; k < rest.size(); ++k) outs[rest_at[k]] = rest_outs[k];
      std::map<int, std::string> failed;
      for (size_t i = 0; i < tasks.size(); ++i) {
        record(tasks[i], outs[i]);
        if (outs[i].status != "pass" && !failed.count(owner[i])) {
          std::string why = std::string(vcgen::to_string(tasks[i].kind)) + " " + outs[i].status;
          if (!outs[i].note.empty()) why += ": " + outs[i].note;
          failed[owner[i]] = why;
        }
      }
      if (failed.empty()) {
        for (int id : active) {
          v_.candidates[id].status = CandStatus::Proven;
          facts_[c].push_back(v_.candidates[id].formula);
        }
        return true;
      }
      if (c == g_.end()) {
        for (const auto& [id, why] : failed) v_.candidates[id].reason = why;
        return false;
      }
      for (const auto& [id, why] : failed) miner::drop(v_.candidates, {id}, why);
    }
    v_.notes.push_back("refinement at " + label + " did not settle within " +
                       std::to_string(plan_.rounds) + " rounds");
    for (auto& cand : v_.candidates)
      if (cand.cutpoint == label && cand.status != CandStatus::Dropped)
        miner::drop(v_.candidates, {cand.id}, "unsettled after the last round");
    return true;
  }

  const Program& p_;
  const RunPlan& plan_;
  Verdict& v_;
  Clock::time_point t0_;
  QueryRunner q_;
  cfg::Cfg g_;
  std::vector<cfg::Segment> segs_;
  std::vector<frontend::ExprP> G_;
  std::map<int, std::vector<QuantAssertion>> facts_;
  std::map<TileKey, tiler::TileResult> tiles_;
  bool t1_blocked_ = false;
};

}  // namespace

Verdict tiled_verify(const Program& p, const RunPlan& plan) {
  Verdict v;
  v.benchmark = p.name;
  Verifier ver(p, plan, v);
  ver.run();
  v.wall_ms = ver.elapsed();
  return v;
}

Verdict verify_file(const std::string& path, const RunPlan& plan) {
  return tiled_verify(frontend::parse_file(path), plan);
}

nlohmann::ordered_json to_json(const Verdict& v) {
  using J = nlohmann::ordered_json;
  J j;
  j["benchmark"] = v.benchmark;
  j["status"] = to_string(v.status);
  j["tiles"] = J::array();
  for (const auto& t : v.tiles) {
    J x;
    x["segment"] = t.segment;
    x["array"] = t.array;
    x["formula"] = t.formula;
    x["closed_form"] = t.closed_form.empty() ? J() : J(t.closed_form);
    x["initial"] = t.initial;
    x["source_form"] = t.source_form;
    x["from_reads"] = t.from_reads;
    if (!t.strict.empty()) x["strict"] = t.strict;
    j["tiles"].push_back(x);
  }
  j["tasks"] = J::array();
  for (const auto& t : v.tasks) {
    J x;
    x["kind"] = t.kind;
    x["segment"] = t.segment;
    x["status"] = t.status;
    x["time_ms"] = t.time_ms;
    x["subject"] = t.subject;
    if (!t.note.empty()) x["note"] = t.note;
    j["tasks"].push_back(x);
  }
  j["candidates"] = J::array();
  for (const auto& c : v.candidates) {
    J x;
    x["cutpoint"] = c.cutpoint;
    x["formula"] = c.text();
    x["status"] = miner::to_string(c.status);
    x["origin"] = c.origin;
    if (!c.reason.empty()) x["reason"] = c.reason;
    j["candidates"].push_back(x);
  }
  j["cex"] = nullptr;
  if (v.cex) {
    J x;
    x["scalars"] = v.cex->scalars;
    x["arrays"] = v.cex->arrays;
    J w = J::object();
    for (const auto& [n, val] : v.cex->witness) w[n] = val;
    x["witness"] = w;
    j["cex"] = x;
  }
  j["rounds"] = v.rounds;
  j["wall_ms"] = v.wall_ms;
  j["notes"] = v.notes;
  return j;
}

}  // namespace tileproof::driver
