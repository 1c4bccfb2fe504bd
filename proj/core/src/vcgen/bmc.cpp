#include "tileproof/vcgen/bmc.hpp"

#include <algorithm>

#include "tileproof/frontend/printer.hpp"

namespace tileproof::vcgen {

using frontend::ExprP;
using frontend::Op;
using frontend::StmtKind;
using frontend::StmtP;

namespace {

struct Path {
  TermP pc;
  Env env;
};

class Unroller {
 public:
  Unroller(const Program& p, const BmcConfig& cfg) : p_(p), cfg_(cfg) {}

  std::vector<TermP> side;  // definitions and in-bounds guards
  smt::FreshNames fresh;

  void run(const StmtP& st, Path& s) {
    switch (st->kind) {
      case StmtKind::Skip: return;
      case StmtKind::Assign: {
        TermP rhs = eval(st->expr, s);
        s.env.scalars[st->var] = define(st->var, rhs, false);
        return;
      }
      case StmtKind::Store: {
        TermP idx = eval(st->index, s);
        TermP val = eval(st->expr, s);
        in_bounds(st->var, idx, s);
        s.env.arrays[st->var] = define(st->var, smt::store(s.env.array(st->var), idx, val), true);
        return;
      }
      case StmtKind::Assume: s.pc = smt::and_(s.pc, eval(st->expr, s)); return;
      case StmtKind::Seq:
        for (const auto& c : st->children) run(c, s);
        return;
      case StmtKind::If: {
        TermP c = eval(st->expr, s);
        Path t{smt::and_(s.pc, c), s.env}, e{smt::and_(s.pc, smt::not_(c)), s.env};
        run(st->children[0], t);
        run(st->children[1], e);
        s = merge(t, e);
        return;
      }
      case StmtKind::For: {
        s.env.scalars[st->var] = smt::int_lit(0);
        for (int k = 0; k < cfg_.unwind; ++k) {
          TermP c = smt::lt(s.env.scalar(st->var), eval(st->expr, s));
          Path t{smt::and_(s.pc, c), s.env}, e{smt::and_(s.pc, smt::not_(c)), s.env};
          run(st->children[0], t);
          t.env.scalars[st->var] =
              define(st->var, smt::add(t.env.scalar(st->var), smt::int_lit(1)), false);
          s = merge(t, e);
        }
        s.pc = smt::and_(s.pc, smt::not_(smt::lt(s.env.scalar(st->var), eval(st->expr, s))));
        return;
      }
    }
  }

  TermP eval(const ExprP& e, const Path& s) {
    std::vector<TermP> guards;
    TermP t = lower(e, s.env, &guards);
    for (const auto& g : guards) side.push_back(smt::implies(s.pc, g));
    std::vector<std::pair<std::string, ExprP>> reads;
    frontend::collect_reads(e, reads);
    for (const auto& [a, idx] : reads) in_bounds(a, lower(idx, s.env), s);
    return t;
  }

 private:
  void in_bounds(const std::string& a, const TermP& idx, const Path& s) {
    const frontend::ArrayDecl* d = p_.array(a);
    if (!d) return;
    side.push_back(smt::implies(
        s.pc, smt::and_(smt::le(smt::int_lit(0), idx), smt::lt(idx, lower(d->size)))));
  }

  TermP define(const std::string& base, const TermP& rhs, bool array) {
    std::string n = fresh.fresh(base);
    TermP v = array ? smt::array_var(n) : smt::var(n);
    side.push_back(smt::eq(v, rhs));
    return v;
  }

  Path merge(const Path& a, const Path& b) {
    Path m;
    TermP pv = smt::var(fresh.fresh("pc"), smt::Sort::Bool);
    side.push_back(smt::eq(pv, smt::or_(a.pc, b.pc)));
    m.pc = pv;
    std::set<std::string> names, arrays;
    for (const auto* x : {&a, &b}) {
      for (const auto& [n, t] : x->env.scalars) names.insert(n);
      for (const auto& [n, t] : x->env.arrays) arrays.insert(n);
    }
    for (const auto& n : names) {
      TermP va = a.env.scalar(n), vb = b.env.scalar(n);
      m.env.scalars[n] = smt::equal(va, vb) ? va : define(n, smt::ite(a.pc, va, vb), false);
    }
    for (const auto& n : arrays) {
      TermP va = a.env.array(n), vb = b.env.array(n);
      m.env.arrays[n] = smt::equal(va, vb) ? va : define(n, smt::ite(a.pc, va, vb), true);
    }
    return m;
  }

  const Program& p_;
  const BmcConfig& cfg_;
};

bool trivial(const QuantAssertion& q) {
  return q.body->op == Op::Bool && q.body->value != 0;
}

}  // namespace

CheckTask encode_bmc(const Program& p, const BmcConfig& cfg) {
  CheckTask task;
  task.kind = TaskKind::Bmc;
  task.segment = "S-E";
  task.subject = "unwind " + std::to_string(cfg.unwind);
  Unroller u(p, cfg);
  Path s{smt::tru(), {}};
  u.run(p.body, s);
  smt::Script sc;
  sc.comments.push_back("bounded check, unwind " + std::to_string(cfg.unwind));
  for (const auto& n : p.params) {
    sc.add(smt::ge(smt::var(n), smt::int_lit(1)));
    sc.add(smt::le(smt::var(n), smt::int_lit(cfg.max_param)));
  }
  if (!trivial(p.pre)) sc.add(assume_at(p.pre, Env{}, {}));
  for (const auto& t : u.side) sc.add(t);
  sc.add(s.pc);
  std::vector<TermP> sk;
  sc.add(refute(p.post, s.env, "__j", &sk));
  sc.want_model = true;
  for (const auto& n : p.params) sc.get_values.push_back(smt::var(n));
  for (const auto& n : p.scalars)
    if (!p.loop_counters.count(n)) sc.get_values.push_back(smt::var(n));
  for (const auto& a : p.arrays)
    for (int k = 0; k < cfg.cells; ++k)
      sc.get_values.push_back(smt::select(smt::array_var(a.name), smt::int_lit(k)));
  task.script = std::move(sc);
  return task;
}

std::optional<std::vector<std::pair<std::string, int64_t>>> find_violation(
    const Program& p, const QuantAssertion& q, const exec::State& s) {
  int64_t m = 0;
  for (const auto& [n, a] : s.arrays) m = std::max<int64_t>(m, a.size());
  for (const auto& [n, v] : s.scalars)
    if (p.is_param(n)) m = std::max(m, v);
  std::map<std::string, int64_t> bound;
  std::optional<std::vector<std::pair<std::string, int64_t>>> found;
  auto rec = [&](auto&& self, size_t k) -> void {
    if (found) return;
    if (k == q.vars.size()) {
      try {
        if (exec::eval_bool(q.range, s, &bound) && !exec::eval_bool(q.body, s, &bound)) {
          std::vector<std::pair<std::string, int64_t>> w(bound.begin(), bound.end());
          found = w;
        }
      } catch (const exec::RunError&) {
      }
      return;
    }
    for (int64_t v = -m - 2; v <= m + 2; ++v) {
      bound[q.vars[k]] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return found;
}

std::optional<Counterexample> confirm(const Program& p, const exec::State& input) {
  try {
    if (!exec::eval_assertion(p, p.pre, input)) return std::nullopt;
    exec::State s = input;
    if (exec::execute(p, s) != exec::Outcome::Ok) return std::nullopt;
    if (exec::eval_post(p, s)) return std::nullopt;
    Counterexample cex;
    for (const auto& [n, v] : input.scalars)
      if (!p.loop_counters.count(n)) cex.scalars[n] = v;
    cex.arrays = input.arrays;
    if (auto w = find_violation(p, p.post, s)) cex.witness = *w;
    return cex;
  } catch (const exec::RunError&) {
    return std::nullopt;
  }
}

std::optional<Counterexample> replay(const Program& p, const smt::Model& m, const BmcConfig& cfg) {
  auto value = [&](const std::string& key, int64_t dflt) {
    auto it = m.get_values.find(key);
    return it == m.get_values.end() ? dflt : it->second;
  };
  std::map<std::string, int64_t> params;
  for (const auto& n : p.params) params[n] = value(n, m.int_value(n, 1));
  exec::State s;
  try {
    s = exec::make_state(p, params);
  } catch (const exec::RunError&) {
    return std::nullopt;
  }
  for (const auto& n : p.scalars)
    if (!p.loop_counters.count(n)) s.scalars[n] = value(n, m.int_value(n, 0));
  for (auto& [name, cells] : s.arrays) {
    smt::ArrayValue av = m.array_value(name);
    for (size_t k = 0; k < cells.size(); ++k) {
      int64_t v = av.at(static_cast<int64_t>(k));
      if (static_cast<int>(k) < cfg.cells)
        v = value("(select " + name + " " + std::to_string(k) + ")", v);
      cells[k] = v;
    }
  }
  return confirm(p, s);
}

}  // namespace tileproof::vcgen
