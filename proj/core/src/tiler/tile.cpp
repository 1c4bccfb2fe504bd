#include "tileproof/tiler/tile.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tileproof/frontend/printer.hpp"
#include "tileproof/vcgen/lower.hpp"

namespace tileproof::tiler {

using namespace frontend;
using cfg::NodeKind;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(TileStatus s) {
  switch (s) {
    case TileStatus::Ok: return "ok";
    case TileStatus::NoTile: return "no-tile";
    case TileStatus::Opaque: return "opaque";
    case TileStatus::PathLimit: return "path-limit";
  }
  return "?";
}

namespace {

struct LoopWrites {
  std::set<std::string> scalars;
  std::set<std::string> arrays;
  std::string counter;
};

LoopWrites loop_writes(const cfg::Cfg& g, int loop) {
  LoopWrites w;
  if (loop < 0) return w;
  const cfg::Loop& l = g.loops().at(loop);
  w.counter = l.counter;
  for (int n : l.nodes) {
    const cfg::Node& nd = g.node(n);
    if (nd.kind == NodeKind::Assign) w.scalars.insert(nd.var);
    if (nd.kind == NodeKind::Store) w.arrays.insert(nd.var);
  }
  return w;
}

struct Walker {
  const cfg::Cfg& g;
  const cfg::Segment& seg;
  size_t limit;
  LoopWrites lw;
  std::map<int, std::vector<int>> succ;
  Accesses out;
  std::set<std::string> seen_w, seen_r;

  AccessExpr classify(const std::string& array, const ExprP& idx) {
    AccessExpr a{array, normalize(idx)};
    std::set<std::string> vs, as;
    collect_vars(a.expr, vs, as);
    for (const auto& x : as) a.opaque = a.opaque || lw.arrays.count(x) > 0;
    for (const auto& v : vs) a.unstable = a.unstable || (lw.scalars.count(v) > 0 && v != lw.counter);
    return a;
  }

  void note(std::vector<AccessExpr>& dst, std::set<std::string>& seen, AccessExpr a) {
    std::string key = a.array + "|" + to_string(a.expr);
    if (seen.insert(key).second) dst.push_back(std::move(a));
  }

  void reads_of(const ExprP& e, const std::map<std::string, ExprP>& sub) {
    if (!e) return;
    std::vector<std::pair<std::string, ExprP>> rs;
    collect_reads(substitute(e, sub), rs);
    for (auto& [arr, idx] : rs) note(out.reads, seen_r, classify(arr, idx));
  }

  void walk(int n, std::map<std::string, ExprP> sub) {
    if (out.path_limit_hit) return;
    const cfg::Node& nd = g.node(n);
    if (n != seg.source) {
      switch (nd.kind) {
        case NodeKind::Assign:
          reads_of(nd.expr, sub);
          sub[nd.var] = normalize(substitute(nd.expr, sub));
          break;
        case NodeKind::Store:
          reads_of(nd.index, sub);
          reads_of(nd.expr, sub);
          note(out.writes, seen_w, classify(nd.var, substitute(nd.index, sub)));
          break;
        case NodeKind::Assume:
        case NodeKind::Cond: reads_of(nd.expr, sub); break;
        case NodeKind::CounterInit: sub[nd.var] = mk_int(0); break;
        case NodeKind::CounterIncr:
          sub[nd.var] = normalize(mk_add(substitute(mk_var(nd.var), sub), mk_int(1)));
          break;
        default: break;
      }
    }
    auto it = succ.find(n);
    if (n == seg.sink || it == succ.end() || it->second.empty()) {
      if (++out.paths > limit) out.path_limit_hit = true;
      return;
    }
    for (int d : it->second) walk(d, sub);
  }
};

ExprP disjunction(const std::vector<ExprP>& es, const std::string& j) {
  std::vector<ExprP> ds;
  for (const auto& e : es) ds.push_back(mk_bin(Op::Eq, mk_var(j), e));
  return mk_or(ds);
}

std::vector<smt::TermP> base_facts(const std::vector<ExprP>& assumptions) {
  return vcgen::lower_all(assumptions);
}

CheckStatus unsat_means_pass(const smt::QueryFn& query, const smt::Script& s,
                             const std::string& tag) {
  if (!query) return CheckStatus::Unknown;
  smt::SolverResult r = query(s, tag);
  if (r.status == smt::Status::Unsat) return CheckStatus::Pass;
  if (r.status == smt::Status::Sat) return CheckStatus::Fail;
  return CheckStatus::Unknown;
}

}  // namespace

Accesses collect_accesses(const cfg::Cfg& g, const cfg::Segment& seg, size_t path_limit) {
  Walker w{g, seg, path_limit, loop_writes(g, seg.loop), {}, {}, {}, {}};
  for (int e : seg.edges) w.succ[g.edges()[e].src];
  for (int n : seg.nodes)
    for (int e : g.out_edges(n))
      if (std::find(seg.edges.begin(), seg.edges.end(), e) != seg.edges.end())
        w.succ[n].push_back(g.edges()[e].dst);
  w.walk(seg.source, {});
  return w.out;
}

ExprP TilePredicate::formula() const { return disjunction(exprs, j); }
ExprP TilePredicate::init_formula() const { return disjunction(init_exprs, j); }

ExprP TilePredicate::at(const ExprP& ell_val, const ExprP& j_val, bool initial) const {
  std::map<std::string, ExprP> m{{ell, ell_val}, {j, j_val}};
  return substitute(initial ? init_formula() : formula(), m);
}

ExprP TilePredicate::display() const {
  return closed_form ? interval_formula(*closed_form, j) : formula();
}

ExprP TilePredicate::display_init() const {
  return init_closed_form ? interval_formula(*init_closed_form, j) : init_formula();
}

ExprP interval_formula(const Interval& iv, const std::string& j) {
  // A one-wide interval prints as an equation.
  ExprP width = normalize(mk_sub(iv.hi, iv.lo));
  if (width->op == Op::Int && width->value == 1) return mk_bin(Op::Eq, mk_var(j), iv.lo);
  return mk_and({mk_bin(Op::Le, iv.lo, mk_var(j)), mk_bin(Op::Lt, mk_var(j), iv.hi)});
}

std::optional<Interval> simplify(const std::vector<ExprP>& exprs, const std::string& ell) {
  if (exprs.empty()) return std::nullopt;
  std::optional<Affine> first;
  std::set<int64_t> offsets;
  for (const auto& e : exprs) {
    auto a = affine_in(e, ell);
    if (!a) return std::nullopt;
    if (!first) {
      first = a;
    } else {
      if (a->coeff != first->coeff) return std::nullopt;
      if (a->rest.terms.size() != first->rest.terms.size()) return std::nullopt;
      for (const auto& [k, t] : a->rest.terms) {
        auto it = first->rest.terms.find(k);
        if (it == first->rest.terms.end() || it->second.first != t.first) return std::nullopt;
      }
    }
    offsets.insert(a->rest.constant);
  }
  int64_t lo = *offsets.begin(), hi = *offsets.rbegin();
  if (hi - lo + 1 != static_cast<int64_t>(offsets.size())) return std::nullopt;
  Linear base = first->rest;
  base.constant = 0;
  ExprP lin = mk_add(mk_bin(Op::Mul, mk_int(first->coeff), mk_var(ell)), from_linear(base));
  return Interval{normalize(mk_add(lin, mk_int(lo))), normalize(mk_add(lin, mk_int(hi + 1)))};
}

TileResult find_heuristic_tile(const TileContext& ctx, const std::string& array, bool from_reads) {
  TileResult r;
  Accesses acc = collect_accesses(*ctx.g, *ctx.seg, ctx.path_limit);
  if (acc.path_limit_hit) {
    r.status = TileStatus::PathLimit;
    r.reason = "more than " + std::to_string(ctx.path_limit) + " paths";
    return r;
  }
  std::vector<ExprP> exprs;
  for (const auto& a : from_reads ? acc.reads : acc.writes) {
    if (a.array != array) continue;
    if (a.opaque) {
      r.status = TileStatus::Opaque;
      r.reason = "index " + to_string(a.expr) + " reads an array the loop writes";
      return r;
    }
    if (a.unstable) {
      r.status = TileStatus::NoTile;
      r.reason = "index " + to_string(a.expr) + " depends on a scalar the loop writes";
      return r;
    }
    exprs.push_back(a.expr);
  }
  return tile_from_exprs(ctx, array, exprs, from_reads);
}

TileResult tile_from_exprs(const TileContext& ctx, const std::string& array,
                           const std::vector<ExprP>& exprs, bool from_reads) {
  TileResult r;
  if (exprs.empty()) {
    r.reason = std::string("loop has no ") + (from_reads ? "reads of " : "updates to ") + array;
    return r;
  }
  const cfg::Loop& loop = ctx.g->loops().at(ctx.seg->loop);
  TilePredicate t;
  t.array = array;
  t.ell = ctx.seg->ell;
  t.j = ctx.j;
  t.from_reads = from_reads;
  t.init_exprs = exprs;
  t.init_closed_form = simplify(exprs, t.ell);

  // e(l) is redundant when InitTile(l + k, e(l)) for some later iteration.
  const std::string k = "__k";
  ExprP E = loop.trip;
  for (const auto& e : exprs) {
    bool drop = false;
    if (ctx.query) {
      smt::Script s;
      s.comments.push_back("overlap " + array + " " + to_string(e));
      for (const auto& f : base_facts(ctx.assumptions)) s.add(f);
      ExprP ell = mk_var(t.ell), kv = mk_var(k);
      s.add(vcgen::lower(t.at(mk_add(ell, kv), e, true)));
      s.add(vcgen::lower(mk_bin(Op::Le, mk_int(0), ell)));
      s.add(vcgen::lower(mk_bin(Op::Ge, kv, mk_int(1))));
      s.add(vcgen::lower(mk_bin(Op::Lt, mk_add(ell, kv), E)));
      s.add(vcgen::lower(mk_bin(Op::Ge, E, mk_int(2))));
      drop = ctx.query(s, "overlap").status == smt::Status::Sat;
    }
    if (drop) r.removed.push_back(e);
    else t.exprs.push_back(e);
  }
  if (t.exprs.empty()) {
    r.reason = "every index of " + array + " is revisited by a later iteration";
    return r;
  }
  for (const auto& e : t.exprs) t.affine.push_back(affine_in(e, t.ell));
  t.closed_form = simplify(t.exprs, t.ell);
  if (t.closed_form && ctx.query &&
      check_closed_form(t, ctx.assumptions, ctx.query) == CheckStatus::Fail)
    t.closed_form.reset();
  r.status = TileStatus::Ok;
  r.tile = std::move(t);
  return r;
}

CheckStatus check_closed_form(const TilePredicate& t, const std::vector<ExprP>& assumptions,
                              const smt::QueryFn& query) {
  if (!t.closed_form) return CheckStatus::Unknown;
  smt::Script s;
  s.comments.push_back("closed form " + t.array);
  for (const auto& f : base_facts(assumptions)) s.add(f);
  smt::TermP a = vcgen::lower(interval_formula(*t.closed_form, t.j));
  smt::TermP b = vcgen::lower(t.formula());
  s.add(smt::not_(smt::eq(a, b)));
  return unsat_means_pass(query, s, "closed-form");
}

StrictReport strict_validate(const TilePredicate& t, const ExprP& trip,
                             const std::vector<ExprP>& assumptions, const smt::QueryFn& query) {
  StrictReport rep;
  ExprP k = mk_var("__k"), k2 = mk_var("__k2");
  ExprP j = mk_var("__j"), j1 = mk_var("__j1"), j2 = mk_var("__j2");
  auto in_range = [&](const ExprP& x) {
    return mk_and({mk_bin(Op::Le, mk_int(0), x), mk_bin(Op::Lt, x, trip)});
  };
  auto run = [&](std::vector<ExprP> fs, const std::string& tag) {
    smt::Script s;
    s.comments.push_back(tag + " " + t.array);
    for (const auto& f : base_facts(assumptions)) s.add(f);
    for (const auto& f : fs) s.add(vcgen::lower(f));
    return unsat_means_pass(query, s, tag);
  };
  rep.disjoint = run({in_range(k), in_range(k2), mk_bin(Op::Ne, k, k2), t.at(k, j), t.at(k2, j)},
                     "disjoint");
  rep.range_like = run({in_range(k), mk_bin(Op::Lt, j1, j), mk_bin(Op::Lt, j, j2), t.at(k, j1),
                        t.at(k, j2), mk_not(t.at(k, j))},
                       "range-like");
  ExprP k1 = mk_add(k, mk_int(1));
  rep.compact = run({in_range(k), in_range(k1), t.at(k, j1), t.at(k1, j2), mk_bin(Op::Lt, j1, j),
                     mk_bin(Op::Lt, j, j2), mk_not(t.at(k, j)), mk_not(t.at(k1, j))},
                    "compact");
  return rep;
}

ExprP source_form(const ExprP& tile_formula, const std::string& ell, const LoopOrigin& origin) {
  if (origin.desugared || origin.source_var.empty()) return tile_formula;
  ExprP off = origin.source_offset ? origin.source_offset : mk_int(origin.offset);
  ExprP src = mk_var(origin.source_var);
  ExprP counter = origin.dir >= 0 ? mk_sub(src, off) : mk_sub(off, src);
  return normalize(substitute(tile_formula, {{ell, counter}}));
}

}  // namespace tileproof::tiler
