#include "tileproof/exec/interp.hpp"

#include <algorithm>

#include "tileproof/frontend/linear.hpp"

namespace tileproof::exec {

using namespace frontend;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Ok: return "ok";
    case Outcome::AssumeFailed: return "assume-failed";
    case Outcome::Overflow: return "overflow";
    case Outcome::DivByZero: return "div-by-zero";
    case Outcome::OutOfBounds: return "out-of-bounds";
    case Outcome::StepLimit: return "step-limit";
    case Outcome::Unbound: return "unbound";
  }
  return "?";
}

namespace {

void check_overflow(bool overflow) {
  if (overflow) throw RunError(Outcome::Overflow, "integer overflow");
}

int64_t read_cell(const State& s, const std::string& a, int64_t i) {
  auto it = s.arrays.find(a);
  if (it == s.arrays.end()) throw RunError(Outcome::Unbound, "unbound array " + a);
  if (i < 0 || i >= static_cast<int64_t>(it->second.size()))
    throw RunError(Outcome::OutOfBounds,
                   "read " + a + "[" + std::to_string(i) + "] out of bounds");
  return it->second[static_cast<size_t>(i)];
}

}  // namespace

int64_t eval_int(const ExprP& e, const State& s, const std::map<std::string, int64_t>* bound) {
  switch (e->op) {
    case Op::Int: return e->value;
    case Op::Var: {
      if (bound) {
        auto b = bound->find(e->name);
        if (b != bound->end()) return b->second;
      }
      auto it = s.scalars.find(e->name);
      if (it == s.scalars.end()) throw RunError(Outcome::Unbound, "unbound variable " + e->name);
      return it->second;
    }
    case Op::Read: return read_cell(s, e->name, eval_int(e->args[0], s, bound));
    case Op::Neg: {
      int64_t r = 0;
      check_overflow(__builtin_sub_overflow(int64_t{0}, eval_int(e->args[0], s, bound), &r));
      return r;
    }
    default: break;
  }
  int64_t a = eval_int(e->args[0], s, bound);
  int64_t b = eval_int(e->args[1], s, bound);
  int64_t r = 0;
  switch (e->op) {
    case Op::Add:
      check_overflow(__builtin_add_overflow(a, b, &r));
      return r;
    case Op::Sub:
      check_overflow(__builtin_sub_overflow(a, b, &r));
      return r;
    case Op::Mul:
      check_overflow(__builtin_mul_overflow(a, b, &r));
      return r;
    case Op::Div:
    case Op::Mod:
      if (b == 0) throw RunError(Outcome::DivByZero, "division by zero");
      if (a == INT64_MIN && b == -1) throw RunError(Outcome::Overflow, "integer overflow");
      return e->op == Op::Div ? ediv(a, b) : emod(a, b);
    default: throw RunError(Outcome::Unbound, "boolean expression in integer context");
  }
}

bool eval_bool(const ExprP& e, const State& s, const std::map<std::string, int64_t>* bound) {
  switch (e->op) {
    case Op::Bool: return e->value != 0;
    case Op::And: return eval_bool(e->args[0], s, bound) && eval_bool(e->args[1], s, bound);
    case Op::Or: return eval_bool(e->args[0], s, bound) || eval_bool(e->args[1], s, bound);
    case Op::Implies: return !eval_bool(e->args[0], s, bound) || eval_bool(e->args[1], s, bound);
    case Op::Not: return !eval_bool(e->args[0], s, bound);
    default: break;
  }
  int64_t a = eval_int(e->args[0], s, bound);
  int64_t b = eval_int(e->args[1], s, bound);
  switch (e->op) {
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Ge: return a >= b;
    case Op::Gt: return a > b;
    default: throw RunError(Outcome::Unbound, "integer expression in boolean context");
  }
}

namespace {

struct Exec {
  State& s;
  Observer* obs;
  int64_t steps_left;
  std::map<const Stmt*, int> loop_index;

  void tick() {
    if (--steps_left < 0) throw RunError(Outcome::StepLimit, "step limit exceeded");
  }

  void run(const StmtP& st) {
    tick();
    switch (st->kind) {
      case StmtKind::Skip: return;
      case StmtKind::Assign: s.scalars[st->var] = eval_int(st->expr, s); return;
      case StmtKind::Store: {
        int64_t i = eval_int(st->index, s);
        int64_t v = eval_int(st->expr, s);
        auto& arr = s.arrays.at(st->var);
        if (i < 0 || i >= static_cast<int64_t>(arr.size()))
          throw RunError(Outcome::OutOfBounds,
                         "write " + st->var + "[" + std::to_string(i) + "] out of bounds");
        arr[static_cast<size_t>(i)] = v;
        return;
      }
      case StmtKind::Assume:
        if (!eval_bool(st->expr, s)) throw RunError(Outcome::AssumeFailed, "assume failed");
        return;
      case StmtKind::If: run(st->children[eval_bool(st->expr, s) ? 0 : 1]); return;
      case StmtKind::Seq:
        for (const auto& c : st->children) run(c);
        return;
      case StmtKind::For: {
        int idx = loop_index.at(st.get());
        s.scalars[st->var] = 0;
        for (;;) {
          tick();
          if (!(s.scalars[st->var] < eval_int(st->expr, s))) break;
          if (obs) {
            State start = s;
            run(st->children[0]);
            obs->iteration_end(idx, start.scalars[st->var], start, s);
          } else {
            run(st->children[0]);
          }
          s.scalars[st->var] += 1;
        }
        return;
      }
    }
  }
};

}  // namespace

Outcome execute(const Program& p, State& s, Observer* obs, int64_t max_steps) {
  Exec ex{s, obs, max_steps, {}};
  auto loops = loops_preorder(p.body);
  for (size_t i = 0; i < loops.size(); ++i) ex.loop_index[loops[i].get()] = static_cast<int>(i);
  try {
    ex.run(p.body);
  } catch (const RunError& e) {
    return e.outcome;
  }
  return Outcome::Ok;
}

Outcome run_cfg(const cfg::Cfg& g, State& s, int64_t max_steps) {
  using cfg::EdgeLabel;
  using cfg::NodeKind;
  try {
    int n = g.start();
    while (n != g.end()) {
      if (--max_steps < 0) return Outcome::StepLimit;
      const cfg::Node& nd = g.node(n);
      EdgeLabel take = EdgeLabel::Uncond;
      switch (nd.kind) {
        case NodeKind::Start:
        case NodeKind::End: break;
        case NodeKind::Assign: s.scalars[nd.var] = eval_int(nd.expr, s); break;
        case NodeKind::Store: {
          int64_t i = eval_int(nd.index, s);
          int64_t v = eval_int(nd.expr, s);
          auto& arr = s.arrays.at(nd.var);
          if (i < 0 || i >= static_cast<int64_t>(arr.size())) return Outcome::OutOfBounds;
          arr[static_cast<size_t>(i)] = v;
          break;
        }
        case NodeKind::Assume:
          if (!eval_bool(nd.expr, s)) return Outcome::AssumeFailed;
          break;
        case NodeKind::Cond:
          take = eval_bool(nd.expr, s) ? EdgeLabel::True : EdgeLabel::False;
          break;
        case NodeKind::LoopHead:
          take = s.scalars.at(nd.var) < eval_int(nd.expr, s) ? EdgeLabel::True : EdgeLabel::False;
          break;
        case NodeKind::CounterInit: s.scalars[nd.var] = 0; break;
        case NodeKind::CounterIncr: s.scalars[nd.var] += 1; break;
      }
      int next = -1;
      for (int e : g.out_edges(n)) {
        if (g.edges()[e].label == take) {
          next = g.edges()[e].dst;
          break;
        }
      }
      if (next < 0) throw std::logic_error("cfg node without matching successor");
      n = next;
    }
  } catch (const RunError& e) {
    return e.outcome;
  }
  return Outcome::Ok;
}

State make_state(const Program& p, const std::map<std::string, int64_t>& params) {
  State s;
  for (const auto& n : p.params) {
    auto it = params.find(n);
    if (it == params.end()) throw RunError(Outcome::Unbound, "parameter " + n + " not bound");
    s.scalars[n] = it->second;
  }
  for (const auto& n : p.scalars) s.scalars.emplace(n, 0);
  for (const auto& a : p.arrays) {
    int64_t size = eval_int(a.size, s);
    if (size <= 0) throw RunError(Outcome::OutOfBounds, "array " + a.name + " has size <= 0");
    if (size > 1'000'000) throw RunError(Outcome::Overflow, "array " + a.name + " too large");
    s.arrays[a.name].assign(static_cast<size_t>(size), 0);
  }
  return s;
}

namespace {

bool expand(const Program& p, const QuantAssertion& q, const State& s, size_t k,
            std::map<std::string, int64_t>& bound, int64_t lo, int64_t hi) {
  if (k == q.vars.size()) {
    if (!eval_bool(q.range, s, &bound)) return true;
    return eval_bool(q.body, s, &bound);
  }
  (void)p;
  for (int64_t v = lo; v <= hi; ++v) {
    bound[q.vars[k]] = v;
    if (!expand(p, q, s, k + 1, bound, lo, hi)) return false;
  }
  return true;
}

// True when some assignment with a variable at a window edge satisfies the
// range, which means the window does not contain all of it.
bool touches_edge(const QuantAssertion& q, const State& s, size_t k,
                  std::map<std::string, int64_t>& bound, int64_t lo, int64_t hi, bool on_edge) {
  if (k == q.vars.size()) return on_edge && eval_bool(q.range, s, &bound);
  for (int64_t v = lo; v <= hi; ++v) {
    bound[q.vars[k]] = v;
    if (touches_edge(q, s, k + 1, bound, lo, hi, on_edge || v == lo || v == hi)) return true;
  }
  return false;
}

}  // namespace

bool eval_assertion(const Program& p, const QuantAssertion& q, const State& s) {
  if ((q.body->op == Op::Bool && q.body->value) || (q.range->op == Op::Bool && !q.range->value))
    return true;
  if (q.vars.empty()) return !eval_bool(q.range, s) || eval_bool(q.body, s);
  int64_t maxsize = 0;
  for (const auto& [n, a] : s.arrays) maxsize = std::max<int64_t>(maxsize, a.size());
  for (const auto& [n, v] : s.scalars)
    if (p.is_param(n)) maxsize = std::max(maxsize, v);
  int64_t lo = -maxsize - 2, hi = maxsize + 2;
  std::map<std::string, int64_t> bound;
  if (touches_edge(q, s, 0, bound, lo, hi, false))
    throw RunError(Outcome::Unbound, "assertion range is not bounded by the array sizes");
  bound.clear();
  return expand(p, q, s, 0, bound, lo, hi);
}

bool eval_post(const Program& p, const State& s) { return eval_assertion(p, p.post, s); }

}  // namespace tileproof::exec
