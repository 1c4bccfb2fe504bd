#include "tileproof/vcgen/symexec.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace tileproof::vcgen {

using cfg::EdgeLabel;
using cfg::NodeKind;

namespace {

struct SymState {
  TermP pc;
  Env env;
};

bool in_segment(const cfg::Segment& seg, const std::set<int>* only, int e) {
  if (only) return only->count(e) > 0;
  return std::find(seg.edges.begin(), seg.edges.end(), e) != seg.edges.end();
}

class Exec {
 public:
  Exec(const cfg::Cfg& g, smt::FreshNames& fresh, SymResult& res) : g_(g), fresh_(fresh), res_(res) {}

  SymState merge(const std::vector<SymState>& in) {
    if (in.size() == 1) return in[0];
    SymState s;
    std::vector<TermP> pcs;
    for (const auto& x : in) pcs.push_back(x.pc);
    TermP pv = smt::var(fresh_.fresh("pc"), smt::Sort::Bool);
    res_.defs.push_back(smt::eq(pv, smt::or_(pcs)));
    s.pc = pv;
    std::set<std::string> names, arrays;
    for (const auto& x : in) {
      for (const auto& [n, t] : x.env.scalars) names.insert(n);
      for (const auto& [n, t] : x.env.arrays) arrays.insert(n);
    }
    for (const auto& n : names) s.env.scalars[n] = join(in, n, false);
    for (const auto& n : arrays) s.env.arrays[n] = join(in, n, true);
    return s;
  }

  void apply(const cfg::Node& nd, SymState& s) {
    std::vector<TermP> guards;
    switch (nd.kind) {
      case NodeKind::Assign: {
        TermP rhs = lower(nd.expr, s.env, &guards);
        s.env.scalars[nd.var] = define(nd.var, rhs, false);
        break;
      }
      case NodeKind::Store: {
        TermP idx = lower(nd.index, s.env, &guards);
        TermP val = lower(nd.expr, s.env, &guards);
        res_.stores.push_back({nd.var, idx, s.pc});
        s.env.arrays[nd.var] = define(nd.var, smt::store(s.env.array(nd.var), idx, val), true);
        break;
      }
      case NodeKind::Assume: {
        TermP c = lower(nd.expr, s.env, &guards);
        add_guards(s.pc, guards);
        guards.clear();
        s.pc = smt::and_(s.pc, c);
        break;
      }
      case NodeKind::CounterInit: s.env.scalars[nd.var] = smt::int_lit(0); break;
      case NodeKind::CounterIncr:
        s.env.scalars[nd.var] =
            define(nd.var, smt::add(s.env.scalar(nd.var), smt::int_lit(1)), false);
        break;
      default: break;
    }
    add_guards(s.pc, guards);
  }

  TermP branch(const cfg::Node& nd, EdgeLabel label, SymState& s) {
    TermP c;
    std::vector<TermP> guards;
    if (nd.kind == NodeKind::Cond) c = lower(nd.expr, s.env, &guards);
    else if (nd.kind == NodeKind::LoopHead)
      c = smt::lt(s.env.scalar(nd.var), lower(nd.expr, s.env, &guards));
    add_guards(s.pc, guards);
    if (!c || label == EdgeLabel::Uncond) return s.pc;
    return smt::and_(s.pc, label == EdgeLabel::True ? c : smt::not_(c));
  }

 private:
  TermP define(const std::string& base, const TermP& rhs, bool array) {
    std::string n = fresh_.fresh(base);
    TermP v = array ? smt::array_var(n) : smt::var(n);
    res_.defs.push_back(smt::eq(v, rhs));
    return v;
  }

  TermP join(const std::vector<SymState>& in, const std::string& n, bool array) {
    std::vector<TermP> vals;
    for (const auto& x : in) vals.push_back(array ? x.env.array(n) : x.env.scalar(n));
    bool same = true;
    for (const auto& v : vals) same = same && smt::equal(v, vals[0]);
    if (same) return vals[0];
    TermP acc = vals.back();
    for (size_t i = vals.size() - 1; i-- > 0;) acc = smt::ite(in[i].pc, vals[i], acc);
    return define(n, acc, array);
  }

  void add_guards(const TermP& pc, const std::vector<TermP>& guards) {
    for (const auto& gd : guards) res_.defs.push_back(smt::implies(pc, gd));
  }

  const cfg::Cfg& g_;
  smt::FreshNames& fresh_;
  SymResult& res_;
};

}  // namespace

SymResult symexec(const cfg::Cfg& g, const cfg::Segment& seg, smt::FreshNames& fresh,
                  const std::set<int>* only_edges) {
  SymResult res;
  Exec ex(g, fresh, res);
  std::vector<int> order(seg.nodes.begin(), seg.nodes.end());
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.topo_rank(a) < g.topo_rank(b); });
  std::map<int, SymState> on_edge;
  for (int n : order) {
    SymState s;
    if (n == seg.source) {
      s.pc = smt::tru();
    } else {
      std::vector<SymState> in;
      for (int e : g.in_edges(n))
        if (in_segment(seg, only_edges, e) && on_edge.count(e)) in.push_back(on_edge[e]);
      if (in.empty()) continue;
      s = ex.merge(in);
      ex.apply(g.node(n), s);
    }
    if (n == seg.sink) {
      res.pc = s.pc;
      res.out = s.env;
      res.reached = true;
      break;
    }
    for (int e : g.out_edges(n)) {
      if (!in_segment(seg, only_edges, e)) continue;
      SymState t = s;
      t.pc = ex.branch(g.node(n), g.edges()[e].label, t);
      on_edge[e] = std::move(t);
    }
  }
  if (!res.reached) res.pc = smt::fls();
  return res;
}

std::vector<std::set<int>> enumerate_paths(const cfg::Cfg& g, const cfg::Segment& seg,
                                           size_t limit) {
  std::vector<std::set<int>> out;
  std::set<int> cur;
  auto rec = [&](auto&& self, int n) -> void {
    if (out.size() > limit) return;
    if (n == seg.sink) {
      out.push_back(cur);
      return;
    }
    for (int e : g.out_edges(n)) {
      if (!in_segment(seg, nullptr, e)) continue;
      cur.insert(e);
      self(self, g.edges()[e].dst);
      cur.erase(e);
    }
  };
  rec(rec, seg.source);
  return out;
}

size_t count_paths(const cfg::Cfg& g, const cfg::Segment& seg) {
  std::vector<int> order(seg.nodes.begin(), seg.nodes.end());
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.topo_rank(a) > g.topo_rank(b); });
  std::map<int, size_t> n_paths;
  for (int n : order) {
    if (n == seg.sink) {
      n_paths[n] = 1;
      continue;
    }
    size_t c = 0;
    for (int e : g.out_edges(n))
      if (in_segment(seg, nullptr, e)) c += n_paths[g.edges()[e].dst];
    n_paths[n] = c;
  }
  return n_paths[seg.source];
}

void collect_index_terms(const TermP& t, std::vector<TermP>& out, std::set<std::string>& seen) {
  if (t->kind == smt::Kind::Forall || t->kind == smt::Kind::Exists) return;
  if (t->kind == smt::Kind::Select || t->kind == smt::Kind::Store) {
    if (seen.insert(smt::emit(t->args[1])).second) out.push_back(t->args[1]);
  }
  for (const auto& a : t->args) collect_index_terms(a, out, seen);
}

}  // namespace tileproof::vcgen
