#include "tileproof/frontend/ast.hpp"

#include <algorithm>

namespace tileproof::frontend {

namespace {

ExprP make(Op op, int64_t value, std::string name, std::vector<ExprP> args,
           SrcLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->value = value;
  e->name = std::move(name);
  e->args = std::move(args);
  e->loc = loc;
  return e;
}

bool is_true(const ExprP& e) { return e->op == Op::Bool && e->value != 0; }
bool is_false(const ExprP& e) { return e->op == Op::Bool && e->value == 0; }

}  // namespace

ExprP mk_int(int64_t v, SrcLoc loc) { return make(Op::Int, v, "", {}, loc); }
ExprP mk_bool(bool b, SrcLoc loc) { return make(Op::Bool, b ? 1 : 0, "", {}, loc); }
ExprP mk_var(const std::string& name, SrcLoc loc) {
  return make(Op::Var, 0, name, {}, loc);
}
ExprP mk_read(const std::string& array, ExprP index, SrcLoc loc) {
  return make(Op::Read, 0, array, {std::move(index)}, loc);
}
ExprP mk_un(Op op, ExprP a, SrcLoc loc) { return make(op, 0, "", {std::move(a)}, loc); }
ExprP mk_bin(Op op, ExprP a, ExprP b, SrcLoc loc) {
  return make(op, 0, "", {std::move(a), std::move(b)}, loc);
}

ExprP mk_and(const std::vector<ExprP>& xs) {
  std::vector<ExprP> keep;
  for (const auto& x : xs) {
    if (is_false(x)) return mk_bool(false);
    if (!is_true(x)) keep.push_back(x);
  }
  if (keep.empty()) return mk_bool(true);
  ExprP acc = keep[0];
  for (size_t i = 1; i < keep.size(); ++i) acc = mk_bin(Op::And, acc, keep[i]);
  return acc;
}

ExprP mk_or(const std::vector<ExprP>& xs) {
  std::vector<ExprP> keep;
  for (const auto& x : xs) {
    if (is_true(x)) return mk_bool(true);
    if (!is_false(x)) keep.push_back(x);
  }
  if (keep.empty()) return mk_bool(false);
  ExprP acc = keep[0];
  for (size_t i = 1; i < keep.size(); ++i) acc = mk_bin(Op::Or, acc, keep[i]);
  return acc;
}

ExprP mk_not(ExprP a) {
  if (a->op == Op::Bool) return mk_bool(a->value == 0);
  if (a->op == Op::Not) return a->args[0];
  return mk_un(Op::Not, std::move(a));
}

ExprP mk_add(ExprP a, ExprP b) {
  if (a->op == Op::Int && b->op == Op::Int) return mk_int(a->value + b->value);
  if (b->op == Op::Int && b->value == 0) return a;
  if (a->op == Op::Int && a->value == 0) return b;
  return mk_bin(Op::Add, std::move(a), std::move(b));
}

ExprP mk_sub(ExprP a, ExprP b) {
  if (a->op == Op::Int && b->op == Op::Int) return mk_int(a->value - b->value);
  if (b->op == Op::Int && b->value == 0) return a;
  return mk_bin(Op::Sub, std::move(a), std::move(b));
}

bool is_relational(Op op) {
  switch (op) {
    case Op::Lt: case Op::Le: case Op::Eq: case Op::Ne: case Op::Ge: case Op::Gt:
      return true;
    default:
      return false;
  }
}

bool is_bool_op(Op op) {
  return op == Op::Bool || is_relational(op) || op == Op::And || op == Op::Or ||
         op == Op::Not || op == Op::Implies;
}

bool is_bool_expr(const ExprP& e) { return is_bool_op(e->op); }

bool equal(const ExprP& a, const ExprP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->value != b->value || a->name != b->name ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

ExprP substitute(const ExprP& e, const std::map<std::string, ExprP>& scalars) {
  if (e->op == Op::Var) {
    auto it = scalars.find(e->name);
    return it == scalars.end() ? e : it->second;
  }
  if (e->args.empty()) return e;
  std::vector<ExprP> args;
  bool changed = false;
  for (const auto& a : e->args) {
    args.push_back(substitute(a, scalars));
    changed |= args.back() != a;
  }
  if (!changed) return e;
  return make(e->op, e->value, e->name, std::move(args), e->loc);
}

void collect_vars(const ExprP& e, std::set<std::string>& scalars,
                  std::set<std::string>& arrays) {
  if (e->op == Op::Var) scalars.insert(e->name);
  if (e->op == Op::Read) arrays.insert(e->name);
  for (const auto& a : e->args) collect_vars(a, scalars, arrays);
}

void collect_reads(const ExprP& e,
                   std::vector<std::pair<std::string, ExprP>>& out) {
  if (e->op == Op::Read) out.emplace_back(e->name, e->args[0]);
  for (const auto& a : e->args) collect_reads(a, out);
}

bool mentions(const ExprP& e, const std::string& name) {
  if ((e->op == Op::Var || e->op == Op::Read) && e->name == name) return true;
  return std::any_of(e->args.begin(), e->args.end(),
                     [&](const ExprP& a) { return mentions(a, name); });
}

namespace {

StmtP make_stmt(StmtKind k, std::string var, ExprP index, ExprP expr,
                std::vector<StmtP> children, SrcLoc loc, LoopOrigin origin = {}) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  s->var = std::move(var);
  s->index = std::move(index);
  s->expr = std::move(expr);
  s->children = std::move(children);
  s->loc = loc;
  s->origin = std::move(origin);
  return s;
}

}  // namespace

StmtP mk_skip(SrcLoc loc) { return make_stmt(StmtKind::Skip, "", nullptr, nullptr, {}, loc); }
StmtP mk_assign(const std::string& v, ExprP rhs, SrcLoc loc) {
  return make_stmt(StmtKind::Assign, v, nullptr, std::move(rhs), {}, loc);
}
StmtP mk_store(const std::string& a, ExprP idx, ExprP rhs, SrcLoc loc) {
  return make_stmt(StmtKind::Store, a, std::move(idx), std::move(rhs), {}, loc);
}
StmtP mk_assume(ExprP cond, SrcLoc loc) {
  return make_stmt(StmtKind::Assume, "", nullptr, std::move(cond), {}, loc);
}
StmtP mk_if(ExprP cond, StmtP then_s, StmtP else_s, SrcLoc loc) {
  return make_stmt(StmtKind::If, "", nullptr, std::move(cond),
                   {std::move(then_s), std::move(else_s)}, loc);
}
StmtP mk_for(const std::string& counter, ExprP trip, StmtP body, SrcLoc loc,
             LoopOrigin origin) {
  return make_stmt(StmtKind::For, counter, nullptr, std::move(trip), {std::move(body)},
                   loc, std::move(origin));
}
StmtP mk_seq(std::vector<StmtP> items, SrcLoc loc) {
  return make_stmt(StmtKind::Seq, "", nullptr, nullptr, std::move(items), loc);
}

bool equal(const StmtP& a, const StmtP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->var != b->var) return false;
  if ((a->index == nullptr) != (b->index == nullptr)) return false;
  if (a->index && !equal(a->index, b->index)) return false;
  if ((a->expr == nullptr) != (b->expr == nullptr)) return false;
  if (a->expr && !equal(a->expr, b->expr)) return false;
  if (a->children.size() != b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!equal(a->children[i], b->children[i])) return false;
  return true;
}

void write_set(const StmtP& s, std::set<std::string>& scalars,
               std::set<std::string>& arrays) {
  switch (s->kind) {
    case StmtKind::Assign: scalars.insert(s->var); break;
    case StmtKind::Store: arrays.insert(s->var); break;
    case StmtKind::For: scalars.insert(s->var); break;
    default: break;
  }
  for (const auto& c : s->children) write_set(c, scalars, arrays);
}

namespace {
void loops_rec(const StmtP& s, std::vector<StmtP>& out) {
  if (s->kind == StmtKind::For) out.push_back(s);
  for (const auto& c : s->children) loops_rec(c, out);
}
}  // namespace

std::vector<StmtP> loops_preorder(const StmtP& s) {
  std::vector<StmtP> out;
  if (s) loops_rec(s, out);
  return out;
}

bool equal(const QuantAssertion& a, const QuantAssertion& b) {
  return a.vars == b.vars && equal(a.range, b.range) && equal(a.body, b.body);
}

QuantAssertion trivial_assertion() {
  return QuantAssertion{{"j"}, mk_bool(true), mk_bool(true)};
}

bool Program::is_param(const std::string& n) const {
  return std::find(params.begin(), params.end(), n) != params.end();
}
bool Program::is_scalar(const std::string& n) const {
  return is_param(n) || std::find(scalars.begin(), scalars.end(), n) != scalars.end();
}
bool Program::is_array(const std::string& n) const { return array(n) != nullptr; }
const ArrayDecl* Program::array(const std::string& n) const {
  for (const auto& a : arrays)
    if (a.name == n) return &a;
  return nullptr;
}

bool equal(const Program& a, const Program& b) {
  if (a.name != b.name || a.params != b.params || a.scalars != b.scalars ||
      a.loop_counters != b.loop_counters || a.arrays.size() != b.arrays.size())
    return false;
  for (size_t i = 0; i < a.arrays.size(); ++i)
    if (a.arrays[i].name != b.arrays[i].name || !equal(a.arrays[i].size, b.arrays[i].size))
      return false;
  return equal(a.body, b.body) && equal(a.pre, b.pre) && equal(a.post, b.post);
}

}  // namespace tileproof::frontend
