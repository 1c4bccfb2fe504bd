#include "tileproof/miner/miner.hpp"

#include <algorithm>
#include <map>

#include "tileproof/frontend/linear.hpp"
#include "tileproof/frontend/printer.hpp"

namespace tileproof::miner {

using namespace frontend;

std::string Relation::str() const {
  switch (kind) {
    case RelKind::Const: return lhs + " == " + std::to_string(c);
    case RelKind::Offset:
      if (c == 0) return lhs + " == " + rhs;
      return lhs + " == " + rhs + (c > 0 ? " + " : " - ") + std::to_string(c > 0 ? c : -c);
    case RelKind::Le: return lhs + " <= " + rhs;
    case RelKind::Lt: return lhs + " < " + rhs;
    case RelKind::Ne: return lhs + " != " + rhs;
  }
  return "?";
}

const char* to_string(CandStatus s) {
  switch (s) {
    case CandStatus::Unchecked: return "unchecked";
    case CandStatus::Proven: return "proven";
    case CandStatus::Dropped: return "dropped";
  }
  return "?";
}

std::string CandidateInvariant::text() const { return frontend::to_string(formula); }

namespace {

bool is_placeholder(const std::string& n) { return n.find('[') != std::string::npos; }

using Column = std::map<size_t, int64_t>;  // tuple index -> value

struct PairStats {
  size_t n = 0;
  bool same_diff = true;
  int64_t diff = 0;
  bool lt = true, le = true, gt = true, ge = true, ne = true;
};

PairStats compare(const Column& x, const Column& y) {
  PairStats s;
  for (const auto& [k, vx] : x) {
    auto it = y.find(k);
    if (it == y.end()) continue;
    int64_t vy = it->second;
    int64_t d = vx - vy;
    if (s.n == 0) s.diff = d;
    else if (d != s.diff) s.same_diff = false;
    ++s.n;
    s.lt = s.lt && vx < vy;
    s.le = s.le && vx <= vy;
    s.gt = s.gt && vx > vy;
    s.ge = s.ge && vx >= vy;
    s.ne = s.ne && vx != vy;
  }
  return s;
}

}  // namespace

std::vector<Relation> mine_relations(const std::vector<exec::TraceTuple>& tuples,
                                     const MinerConfig& cfg) {
  std::map<std::string, Column> cols;
  for (size_t k = 0; k < tuples.size(); ++k)
    for (const auto& [n, v] : tuples[k].values) cols[n][k] = v;
  std::vector<std::string> names;
  for (const auto& [n, c] : cols)
    if (c.size() >= cfg.min_support) names.push_back(n);

  std::vector<Relation> out;
  std::map<std::string, std::string> rep;
  for (const auto& n : names) rep[n] = n;
  for (size_t a = 0; a < names.size(); ++a) {
    if (rep[names[a]] != names[a]) continue;
    for (size_t b = a + 1; b < names.size(); ++b) {
      if (rep[names[b]] != names[b]) continue;
      PairStats s = compare(cols[names[a]], cols[names[b]]);
      if (s.n >= cfg.min_support && s.same_diff && s.diff == 0) {
        rep[names[b]] = names[a];
        if (cfg.templates.offsets) out.push_back({RelKind::Offset, names[a], names[b], 0, s.n});
      }
    }
  }
  std::vector<std::string> reps;
  for (const auto& n : names)
    if (rep[n] == n) reps.push_back(n);

  std::map<std::string, bool> constant;
  for (const auto& n : reps) {
    const Column& c = cols[n];
    bool same = std::all_of(c.begin(), c.end(),
                            [&](const auto& kv) { return kv.second == c.begin()->second; });
    constant[n] = same;
    if (same && cfg.templates.constants)
      out.push_back({RelKind::Const, n, "", c.begin()->second, c.size()});
  }
  for (size_t a = 0; a < reps.size(); ++a) {
    for (size_t b = a + 1; b < reps.size(); ++b) {
      const std::string &x = reps[a], &y = reps[b];
      if (constant[x] && constant[y]) continue;
      PairStats s = compare(cols[x], cols[y]);
      if (s.n < cfg.min_support) continue;
      if (s.same_diff) {
        if (cfg.templates.offsets && s.diff != 0 &&
            (s.diff < 0 ? -s.diff : s.diff) <= cfg.templates.max_offset)
          out.push_back({RelKind::Offset, x, y, s.diff, s.n});
        continue;
      }
      if (cfg.templates.order) {
        if (s.lt) { out.push_back({RelKind::Lt, x, y, 0, s.n}); continue; }
        if (s.gt) { out.push_back({RelKind::Lt, y, x, 0, s.n}); continue; }
        if (s.le) { out.push_back({RelKind::Le, x, y, 0, s.n}); continue; }
        if (s.ge) { out.push_back({RelKind::Le, y, x, 0, s.n}); continue; }
      }
      if (cfg.templates.disequality && s.ne && is_placeholder(x) == is_placeholder(y))
        out.push_back({RelKind::Ne, x, y, 0, s.n});
    }
  }
  return out;
}

std::optional<QuantAssertion> lift(const Relation& r, const LoopShape& shape) {
  std::vector<std::string> names{r.lhs};
  if (r.kind != RelKind::Const) names.push_back(r.rhs);
  const exec::Placeholder* first = nullptr;
  bool has_free_scalar = false, has_counter = false;
  for (const auto& n : names) {
    if (is_placeholder(n)) {
      auto it = std::find_if(shape.cells.begin(), shape.cells.end(),
                             [&](const exec::Placeholder& p) { return p.name == n; });
      if (it == shape.cells.end()) return std::nullopt;
      if (!first) first = &*it;
      continue;
    }
    if (n == shape.counter) has_counter = true;
    else if (!shape.params.count(n)) has_free_scalar = true;
    else if (r.kind == RelKind::Const) return std::nullopt;
  }
  if (!first && (!has_free_scalar || has_counter)) return std::nullopt;

  auto atom = [&](const std::string& n, const std::map<std::string, ExprP>& sub) -> ExprP {
    if (!is_placeholder(n)) return n == shape.counter ? sub.at(n) : mk_var(n);
    auto it = std::find_if(shape.cells.begin(), shape.cells.end(),
                           [&](const exec::Placeholder& p) { return p.name == n; });
    return mk_read(it->array, normalize(substitute(it->index, sub)));
  };
  auto relation = [&](const std::map<std::string, ExprP>& sub) -> ExprP {
    ExprP l = atom(r.lhs, sub);
    switch (r.kind) {
      case RelKind::Const: return mk_bin(Op::Eq, l, mk_int(r.c));
      case RelKind::Offset: return mk_bin(Op::Eq, l, normalize(mk_add(atom(r.rhs, sub), mk_int(r.c))));
      case RelKind::Le: return mk_bin(Op::Le, l, atom(r.rhs, sub));
      case RelKind::Lt: return mk_bin(Op::Lt, l, atom(r.rhs, sub));
      case RelKind::Ne: return mk_bin(Op::Ne, l, atom(r.rhs, sub));
    }
    return mk_bool(true);
  };

  QuantAssertion q;
  if (!first) {
    q.range = mk_bool(true);
    q.body = relation({});
    return q;
  }
  auto aff = affine_in(first->index, shape.counter);
  if (!aff || aff->coeff == 0) return std::nullopt;
  ExprP j = mk_var(shape.index_var);
  ExprP off = from_linear(aff->rest);
  ExprP d = mk_sub(j, off);
  ExprP E = shape.trip;
  int64_t a = aff->coeff;
  ExprP ell;
  if (a == 1 || a == -1) {
    ell = normalize(a == 1 ? d : mk_sub(off, j));
    q.range = a == 1 ? mk_and({mk_bin(Op::Le, off, j), mk_bin(Op::Lt, j, normalize(mk_add(off, E)))})
                     : mk_and({mk_bin(Op::Lt, normalize(mk_sub(off, E)), j), mk_bin(Op::Le, j, off)});
  } else {
    ell = mk_bin(Op::Div, normalize(d), mk_int(a));
    q.range = mk_and({mk_bin(Op::Eq, mk_bin(Op::Mod, normalize(d), mk_int(a < 0 ? -a : a)), mk_int(0)),
                      mk_bin(Op::Le, mk_int(0), ell), mk_bin(Op::Lt, ell, E)});
  }
  q.range = normalize(q.range);
  q.vars = {shape.index_var};
  q.body = normalize(relation({{shape.counter, ell}}));
  return q;
}

std::vector<CandidateInvariant> mine(const Program& p, const cfg::Cfg& g,
                                     const std::vector<exec::TraceTuple>& tuples,
                                     const exec::Instrumentation& probes, const MinerConfig& cfg) {
  std::vector<CandidateInvariant> out;
  auto segs = cfg::segments(g);
  std::set<std::string> seen;
  for (const auto& loop : g.loops()) {
    bool nested = loop.parent >= 0;
    for (const auto& other : g.loops()) nested = nested || other.parent == loop.index;
    if (nested) continue;
    int target = -1;
    for (const auto& s : segs)
      if (s.source == loop.head && !s.closes_loop) target = s.target;
    if (target < 0 || target == g.end()) continue;
    auto probe = probes.find(loop.index);
    if (probe == probes.end()) continue;

    std::vector<exec::TraceTuple> mine_from;
    for (const auto& t : tuples)
      if (t.loop == loop.index) mine_from.push_back(t);
    LoopShape shape;
    shape.counter = loop.counter;
    shape.trip = loop.trip;
    shape.cells = probe->second.cells;
    shape.params.insert(p.params.begin(), p.params.end());
    if (p.is_scalar("j")) shape.index_var = "j_";
    for (const auto& r : mine_relations(mine_from, cfg)) {
      auto q = lift(r, shape);
      if (!q) continue;
      CandidateInvariant c;
      c.cutpoint = g.cut_label(target);
      c.formula = *q;
      c.origin = "mined";
      if (!seen.insert(c.cutpoint + "|" + c.text()).second) continue;
      c.id = static_cast<int>(out.size());
      out.push_back(std::move(c));
    }
  }
  return out;
}

void drop(std::vector<CandidateInvariant>& cands, const std::vector<int>& ids,
          const std::string& reason) {
  for (auto& c : cands)
    if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) {
      c.status = CandStatus::Dropped;
      c.reason = reason;
    }
}

}  // namespace tileproof::miner
