#include "tileproof/vcgen/vc.hpp"

#include <cstdlib>

#include "tileproof/frontend/printer.hpp"
#include "tileproof/vcgen/symexec.hpp"

namespace tileproof::vcgen {

using frontend::ExprP;
using frontend::Op;
using tiler::TilePredicate;

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::T1: return "T1";
    case TaskKind::T2Star: return "T2*";
    case TaskKind::T3Star: return "T3*";
    case TaskKind::T2DStar: return "T2**";
    case TaskKind::ZeroTrip: return "ZERO_TRIP";
    case TaskKind::Bmc: return "BMC";
    case TaskKind::Tightness: return "TIGHTNESS";
    case TaskKind::Strict: return "STRICT";
  }
  return "?";
}

const char* file_tag(TaskKind k) {
  switch (k) {
    case TaskKind::T1: return "T1";
    case TaskKind::T2Star: return "T2s";
    case TaskKind::T3Star: return "T3s";
    case TaskKind::T2DStar: return "T2ss";
    case TaskKind::ZeroTrip: return "ZT";
    case TaskKind::Bmc: return "BMC";
    case TaskKind::Tightness: return "TIGHTNESS";
    case TaskKind::Strict: return "STRICT";
  }
  return "X";
}

void loop_write_set(const cfg::Cfg& g, int loop, std::set<std::string>& scalars,
                    std::set<std::string>& arrays) {
  const cfg::Loop& l = g.loops().at(loop);
  scalars.insert(l.counter);
  for (int n : l.nodes) {
    const cfg::Node& nd = g.node(n);
    if (nd.kind == cfg::NodeKind::Assign || nd.kind == cfg::NodeKind::CounterInit ||
        nd.kind == cfg::NodeKind::CounterIncr)
      scalars.insert(nd.var);
    if (nd.kind == cfg::NodeKind::Store) arrays.insert(nd.var);
  }
}

namespace {

void assertion_vars(const QuantAssertion& q, std::set<std::string>& vs,
                    std::set<std::string>& as) {
  frontend::collect_vars(q.range, vs, as);
  frontend::collect_vars(q.body, vs, as);
  for (const auto& v : q.vars) vs.erase(v);
}

Env with_var(Env env, const std::string& name, const TermP& t) {
  env.scalars[name] = t;
  return env;
}

TermP implication(const QuantAssertion& q, const Env& env) {
  return lower(frontend::mk_bin(Op::Implies, q.range, q.body), env);
}

TermP tile_at(const TilePredicate& t, const TermP& ell, const TermP& j, const Env& env) {
  return lower(t.formula(), with_var(with_var(env, t.ell, ell), t.j, j));
}

bool all_affine(const TilePredicate& t) {
  for (const auto& a : t.affine)
    if (!a) return false;
  return !t.affine.empty();
}

/// exists k in [0, bound): tile(k, idx). Quantifier-free for affine tiles.
TermP covered(const TilePredicate& t, const TermP& idx, const TermP& bound, const Env& env,
              bool allow_qf = true) {
  if (allow_qf && all_affine(t)) {
    std::vector<TermP> ds;
    for (const auto& a : t.affine) {
      TermP b = lower(frontend::from_linear(a->rest), env);
      if (a->coeff == 0) {
        ds.push_back(smt::and_(smt::eq(idx, b), smt::gt(bound, smt::int_lit(0))));
        continue;
      }
      TermP d = smt::sub(idx, b);
      TermP q = smt::div(d, smt::int_lit(a->coeff));
      ds.push_back(smt::and_({smt::eq(smt::mod(d, smt::int_lit(std::llabs(a->coeff))), smt::int_lit(0)),
                              smt::le(smt::int_lit(0), q), smt::lt(q, bound)}));
    }
    return smt::or_(ds);
  }
  TermP k = smt::var("__lk");
  return smt::exists({{"__lk", smt::Sort::Int}},
                     smt::and_({smt::le(smt::int_lit(0), k), smt::lt(k, bound),
                                tile_at(t, k, idx, env)}));
}

std::optional<std::string> shape_problem(const QuantAssertion& q) {
  if (q.vars.size() != 1) return "target must quantify exactly one index variable";
  return std::nullopt;
}

std::vector<TermP> index_terms(const std::vector<TermP>& fs, const TermP& extra) {
  std::vector<TermP> out;
  std::set<std::string> seen;
  if (extra) {
    out.push_back(extra);
    seen.insert(smt::emit(extra));
  }
  for (const auto& f : fs) collect_index_terms(f, out, seen);
  return out;
}

void add_all(smt::Script& s, const std::vector<TermP>& fs) {
  for (const auto& f : fs) s.add(f);
}

std::string describe(const QuantAssertion& q) {
  std::string s = "forall";
  for (const auto& v : q.vars) s += " " + v;
  return s + " :: " + frontend::to_string(q.range) + " ==> " + frontend::to_string(q.body);
}

}  // namespace

bool mentions_any(const QuantAssertion& q, const std::set<std::string>& scalars,
                  const std::set<std::string>& arrays) {
  std::set<std::string> vs, as;
  assertion_vars(q, vs, as);
  for (const auto& v : vs)
    if (scalars.count(v)) return true;
  for (const auto& a : as)
    if (arrays.count(a)) return true;
  return false;
}

TermP assume_at(const QuantAssertion& q, const Env& env, const std::vector<TermP>& terms) {
  if (q.vars.empty()) return implication(q, env);
  if (q.vars.size() == 1) {
    std::vector<TermP> cs;
    for (const auto& t : terms) cs.push_back(implication(q, with_var(env, q.vars[0], t)));
    return smt::and_(cs);
  }
  std::vector<smt::Binder> bs;
  Env e = env;
  for (const auto& v : q.vars) {
    bs.emplace_back(v, smt::Sort::Int);
    e.scalars[v] = smt::var(v);
  }
  return smt::forall(bs, implication(q, e));
}

TermP refute(const QuantAssertion& q, const Env& env, const std::string& prefix,
             std::vector<TermP>* skolems) {
  Env e = env;
  for (const auto& v : q.vars) {
    TermP c = smt::var(q.vars.size() == 1 ? prefix : prefix + "_" + v);
    e.scalars[v] = c;
    if (skolems) skolems->push_back(c);
  }
  return smt::and_(lower(q.range, e), smt::not_(lower(q.body, e)));
}

CheckTask encode_t1(const LoopVc& vc, const TilePredicate& t, const QuantAssertion& target) {
  CheckTask task;
  task.kind = TaskKind::T1;
  task.segment = vc.body->file_label();
  task.subject = describe(target);
  if (auto bad = shape_problem(target)) {
    task.refuted = *bad;
    return task;
  }
  std::set<std::string> ws, wa;
  loop_write_set(*vc.g, vc.body->loop, ws, wa);
  std::set<std::string> vs, as;
  frontend::collect_vars(target.range, vs, as);
  for (const auto& v : vs)
    if (v != target.vars[0] && ws.count(v)) {
      task.refuted = "index range mentions " + v + ", which the loop writes";
      return task;
    }
  const frontend::ArrayDecl* decl = vc.p->array(t.array);
  Env env;
  TermP E = lower(vc.g->loops().at(vc.body->loop).trip);
  TermP J = smt::var("__j");
  TermP L = smt::var(t.ell);
  TermP ind = smt::and_(smt::le(smt::int_lit(0), J), smt::lt(J, lower(decl->size)));
  TermP phi = lower(target.range, with_var(env, target.vars[0], J));
  TermP inside = smt::and_({smt::le(smt::int_lit(0), L), smt::lt(L, E), tile_at(t, L, J, env),
                            smt::not_(ind)});
  auto build = [&](bool qf) {
    smt::Script s;
    s.comments.push_back("T1 " + t.array + " tile " + frontend::to_string(t.display()));
    add_all(s, lower_all(vc.assumptions));
    s.add(smt::ge(E, smt::int_lit(1)));
    TermP uncovered;
    if (qf) {
      uncovered = smt::not_(covered(t, J, E, env));
    } else {
      TermP k = smt::var("__l");
      uncovered = smt::forall({{"__l", smt::Sort::Int}},
                              smt::not_(smt::and_({smt::le(smt::int_lit(0), k), smt::lt(k, E),
                                                   tile_at(t, k, J, env)})));
    }
    s.add(smt::or_(smt::and_({ind, phi, uncovered}), inside));
    return s;
  };
  task.script = build(false);
  if (all_affine(t)) task.fallback = build(true);
  return task;
}

namespace {

struct BodyVc {
  smt::FreshNames fresh;
  SymResult sym;
  TermP E, L, J;
};

BodyVc start_body(const LoopVc& vc) {
  BodyVc b;
  b.sym = symexec(*vc.g, *vc.body, b.fresh);
  b.E = lower(vc.g->loops().at(vc.body->loop).trip);
  b.L = smt::var(vc.body->ell);
  b.J = smt::var("__j");
  return b;
}

}  // namespace

CheckTask encode_t2star(const LoopVc& vc, const TilePredicate& t, const QuantAssertion& target) {
  CheckTask task;
  task.kind = TaskKind::T2Star;
  task.segment = vc.body->file_label();
  task.subject = describe(target);
  if (auto bad = shape_problem(target)) {
    task.refuted = *bad;
    return task;
  }
  BodyVc b = start_body(vc);
  Env pre;
  const std::string& v = target.vars[0];
  std::vector<TermP> fs = lower_all(vc.assumptions);
  fs.push_back(smt::le(smt::int_lit(0), b.L));
  fs.push_back(smt::lt(b.L, b.E));
  fs.push_back(tile_at(t, b.L, b.J, pre));
  fs.push_back(lower(target.range, with_var(pre, v, b.J)));
  fs.insert(fs.end(), b.sym.defs.begin(), b.sym.defs.end());
  fs.push_back(b.sym.pc);
  fs.push_back(smt::not_(lower(target.body, with_var(b.sym.out, v, b.J))));
  std::vector<TermP> terms = index_terms(fs, b.J);
  smt::Script s;
  s.comments.push_back("T2* " + task.subject);
  add_all(s, fs);
  for (const auto& q : vc.inv) s.add(assume_at(q, pre, terms));
  // Earlier iterations already established the target on their tiles.
  for (const auto& x : terms) {
    TermP before = smt::and_(covered(t, x, b.L, pre), lower(target.range, with_var(pre, v, x)));
    s.add(smt::implies(before, lower(target.body, with_var(pre, v, x))));
  }
  task.script = std::move(s);
  return task;
}

CheckTask encode_t3star(const LoopVc& vc, const TilePredicate& t, const QuantAssertion& target) {
  CheckTask task;
  task.kind = TaskKind::T3Star;
  task.segment = vc.body->file_label();
  task.subject = describe(target);
  if (auto bad = shape_problem(target)) {
    task.refuted = *bad;
    return task;
  }
  BodyVc b = start_body(vc);
  Env pre;
  const std::string& v = target.vars[0];
  TermP LP = smt::var("__lp");
  std::vector<TermP> fs = lower_all(vc.assumptions);
  fs.push_back(smt::le(smt::int_lit(0), LP));
  fs.push_back(smt::lt(LP, b.L));
  fs.push_back(smt::lt(b.L, b.E));
  fs.push_back(tile_at(t, LP, b.J, pre));
  fs.push_back(lower(target.range, with_var(pre, v, b.J)));
  fs.push_back(lower(target.body, with_var(pre, v, b.J)));
  fs.insert(fs.end(), b.sym.defs.begin(), b.sym.defs.end());
  fs.push_back(b.sym.pc);
  fs.push_back(smt::not_(lower(target.body, with_var(b.sym.out, v, b.J))));
  std::vector<TermP> terms = index_terms(fs, b.J);
  smt::Script s;
  s.comments.push_back("T3* " + task.subject);
  add_all(s, fs);
  for (const auto& q : vc.inv) s.add(assume_at(q, pre, terms));
  task.script = std::move(s);
  return task;
}

CheckTask encode_zero_trip(const LoopVc& vc, const std::vector<QuantAssertion>& at_head,
                           const QuantAssertion& target) {
  CheckTask task;
  task.kind = TaskKind::ZeroTrip;
  task.segment = vc.body->file_label();
  task.subject = describe(target);
  Env pre;
  std::vector<TermP> fs = lower_all(vc.assumptions);
  TermP E = lower(vc.g->loops().at(vc.body->loop).trip);
  fs.push_back(smt::le(E, smt::int_lit(0)));
  fs.push_back(smt::eq(smt::var(vc.body->ell), smt::int_lit(0)));
  std::vector<TermP> sk;
  fs.push_back(refute(target, pre, "__j", &sk));
  std::vector<TermP> terms = index_terms(fs, nullptr);
  for (const auto& k : sk) terms.push_back(k);
  smt::Script s;
  s.comments.push_back("zero trip " + task.subject);
  add_all(s, fs);
  for (const auto& q : at_head) s.add(assume_at(q, pre, terms));
  task.script = std::move(s);
  return task;
}

CheckTask encode_tightness(const LoopVc& vc, const TilePredicate& t, size_t path_limit) {
  CheckTask task;
  task.kind = TaskKind::Tightness;
  task.segment = vc.body->file_label();
  task.subject = t.array + ": " + frontend::to_string(t.display());
  auto paths = enumerate_paths(*vc.g, *vc.body, path_limit);
  if (paths.size() > path_limit) {
    task.refuted = "more than " + std::to_string(path_limit) + " paths";
    return task;
  }
  smt::FreshNames fresh;
  Env pre;
  TermP E = lower(vc.g->loops().at(vc.body->loop).trip);
  TermP L = smt::var(vc.body->ell);
  TermP J = smt::var("__j");
  std::vector<TermP> fs = lower_all(vc.assumptions);
  fs.push_back(smt::le(smt::int_lit(0), L));
  fs.push_back(smt::lt(L, E));
  fs.push_back(tile_at(t, L, J, pre));
  std::vector<TermP> misses;
  for (const auto& path : paths) {
    SymResult r = symexec(*vc.g, *vc.body, fresh, &path);
    std::vector<TermP> conj = r.defs;
    conj.push_back(r.pc);
    for (const auto& st : r.stores)
      if (st.array == t.array) conj.push_back(smt::ne(st.index, J));
    misses.push_back(smt::and_(conj));
  }
  fs.push_back(smt::or_(misses));
  std::vector<TermP> terms = index_terms(fs, J);
  smt::Script s;
  s.comments.push_back("tightness " + task.subject);
  add_all(s, fs);
  for (const auto& q : vc.inv) s.add(assume_at(q, pre, terms));
  task.script = std::move(s);
  return task;
}

CheckTask encode_t2dstar(const Program& p, const cfg::Cfg& g, const cfg::Segment& seg,
                         const std::vector<ExprP>& assumptions,
                         const std::vector<QuantAssertion>& pre, const QuantAssertion& post) {
  (void)p;
  CheckTask task;
  task.kind = TaskKind::T2DStar;
  task.segment = seg.file_label();
  task.subject = describe(post);
  smt::FreshNames fresh;
  SymResult sym = symexec(g, seg, fresh);
  Env entry;
  std::vector<TermP> fs = lower_all(assumptions);
  fs.insert(fs.end(), sym.defs.begin(), sym.defs.end());
  fs.push_back(sym.pc);
  std::vector<TermP> sk;
  fs.push_back(refute(post, sym.out, "__j", &sk));
  std::vector<TermP> terms = index_terms(fs, nullptr);
  for (const auto& k : sk) terms.push_back(k);
  smt::Script s;
  s.comments.push_back("T2** " + seg.label + " " + task.subject);
  add_all(s, fs);
  for (const auto& q : pre) s.add(assume_at(q, entry, terms));
  task.script = std::move(s);
  return task;
}

}  // namespace tileproof::vcgen
