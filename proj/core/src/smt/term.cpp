#include "tileproof/smt/term.hpp"

#include <sstream>

namespace tileproof::smt {

namespace {

TermP make(Kind k, Sort s, std::vector<TermP> args, int64_t value = 0,
           std::string name = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->sort = s;
  t->args = std::move(args);
  t->value = value;
  t->name = std::move(name);
  return t;
}

bool lit(const TermP& t, int64_t* v) {
  if (t->kind != Kind::IntLit) return false;
  *v = t->value;
  return true;
}

int64_t ediv(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  if (r < 0) q += b > 0 ? -1 : 1;
  return q;
}

const char* op_name(Kind k) {
  switch (k) {
    case Kind::Add: return "+";
    case Kind::Sub: return "-";
    case Kind::Mul: return "*";
    case Kind::Neg: return "-";
    case Kind::Div: return "div";
    case Kind::Mod: return "mod";
    case Kind::Lt: return "<";
    case Kind::Le: return "<=";
    case Kind::Eq: return "=";
    case Kind::Ge: return ">=";
    case Kind::Gt: return ">";
    case Kind::And: return "and";
    case Kind::Or: return "or";
    case Kind::Not: return "not";
    case Kind::Implies: return "=>";
    case Kind::Ite: return "ite";
    case Kind::Select: return "select";
    case Kind::Store: return "store";
    case Kind::Forall: return "forall";
    case Kind::Exists: return "exists";
    default: return "?";
  }
}

void emit_to(const TermP& t, std::ostringstream& os) {
  switch (t->kind) {
    case Kind::IntLit:
      if (t->value < 0) {
        // INT64_MIN has no positive counterpart; print digits directly.
        std::string digits = std::to_string(t->value).substr(1);
        os << "(- " << digits << ')';
      } else {
        os << t->value;
      }
      return;
    case Kind::BoolLit: os << (t->value ? "true" : "false"); return;
    case Kind::Var: os << t->name; return;
    case Kind::Forall:
    case Kind::Exists:
      os << '(' << op_name(t->kind) << " (";
      for (size_t i = 0; i < t->binders.size(); ++i) {
        if (i) os << ' ';
        os << '(' << t->binders[i].first << ' ' << sort_name(t->binders[i].second) << ')';
      }
      os << ") ";
      emit_to(t->args[0], os);
      os << ')';
      return;
    default:
      os << '(' << op_name(t->kind);
      for (const auto& a : t->args) {
        os << ' ';
        emit_to(a, os);
      }
      os << ')';
  }
}

}  // namespace

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Int: return "Int";
    case Sort::Bool: return "Bool";
    case Sort::IntArray: return "(Array Int Int)";
  }
  return "?";
}

TermP int_lit(int64_t v) { return make(Kind::IntLit, Sort::Int, {}, v); }
TermP bool_lit(bool b) { return make(Kind::BoolLit, Sort::Bool, {}, b ? 1 : 0); }
TermP tru() {
  static const TermP t = bool_lit(true);
  return t;
}
TermP fls() {
  static const TermP f = bool_lit(false);
  return f;
}
TermP var(const std::string& name, Sort s) { return make(Kind::Var, s, {}, 0, name); }
TermP array_var(const std::string& name) { return var(name, Sort::IntArray); }

TermP add(TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y)) return int_lit(x + y);
  if (lit(b, &y) && y == 0) return a;
  if (lit(a, &x) && x == 0) return b;
  return make(Kind::Add, Sort::Int, {std::move(a), std::move(b)});
}

TermP add(const std::vector<TermP>& xs) {
  if (xs.empty()) return int_lit(0);
  TermP acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
  return acc;
}

TermP sub(TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y)) return int_lit(x - y);
  if (lit(b, &y) && y == 0) return a;
  return make(Kind::Sub, Sort::Int, {std::move(a), std::move(b)});
}

TermP mul(TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y)) return int_lit(x * y);
  if ((lit(a, &x) && x == 1)) return b;
  if ((lit(b, &y) && y == 1)) return a;
  if ((lit(a, &x) && x == 0) || (lit(b, &y) && y == 0)) return int_lit(0);
  return make(Kind::Mul, Sort::Int, {std::move(a), std::move(b)});
}

TermP neg(TermP a) {
  int64_t x;
  if (lit(a, &x)) return int_lit(-x);
  return make(Kind::Neg, Sort::Int, {std::move(a)});
}

TermP div(TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y) && y != 0) return int_lit(ediv(x, y));
  if (lit(b, &y) && y == 1) return a;
  return make(Kind::Div, Sort::Int, {std::move(a), std::move(b)});
}

TermP mod(TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y) && y != 0) return int_lit(x - y * ediv(x, y));
  return make(Kind::Mod, Sort::Int, {std::move(a), std::move(b)});
}

namespace {
TermP rel(Kind k, TermP a, TermP b) {
  int64_t x, y;
  if (lit(a, &x) && lit(b, &y)) {
    switch (k) {
      case Kind::Lt: return bool_lit(x < y);
      case Kind::Le: return bool_lit(x <= y);
      case Kind::Eq: return bool_lit(x == y);
      case Kind::Ge: return bool_lit(x >= y);
      case Kind::Gt: return bool_lit(x > y);
      default: break;
    }
  }
  return make(k, Sort::Bool, {std::move(a), std::move(b)});
}
}  // namespace

TermP lt(TermP a, TermP b) { return rel(Kind::Lt, std::move(a), std::move(b)); }
TermP le(TermP a, TermP b) { return rel(Kind::Le, std::move(a), std::move(b)); }
TermP eq(TermP a, TermP b) {
  if (a->kind == Kind::BoolLit && b->kind == Kind::BoolLit) return bool_lit(a->value == b->value);
  return rel(Kind::Eq, std::move(a), std::move(b));
}
TermP ne(TermP a, TermP b) { return not_(eq(std::move(a), std::move(b))); }
TermP ge(TermP a, TermP b) { return rel(Kind::Ge, std::move(a), std::move(b)); }
TermP gt(TermP a, TermP b) { return rel(Kind::Gt, std::move(a), std::move(b)); }

TermP and_(const std::vector<TermP>& xs) {
  std::vector<TermP> keep;
  for (const auto& x : xs) {
    if (is_false(x)) return fls();
    if (is_true(x)) continue;
    if (x->kind == Kind::And)
      keep.insert(keep.end(), x->args.begin(), x->args.end());
    else
      keep.push_back(x);
  }
  if (keep.empty()) return tru();
  if (keep.size() == 1) return keep[0];
  return make(Kind::And, Sort::Bool, std::move(keep));
}
TermP and_(TermP a, TermP b) { return and_(std::vector<TermP>{std::move(a), std::move(b)}); }

TermP or_(const std::vector<TermP>& xs) {
  std::vector<TermP> keep;
  for (const auto& x : xs) {
    if (is_true(x)) return tru();
    if (is_false(x)) continue;
    if (x->kind == Kind::Or)
      keep.insert(keep.end(), x->args.begin(), x->args.end());
    else
      keep.push_back(x);
  }
  if (keep.empty()) return fls();
  if (keep.size() == 1) return keep[0];
  return make(Kind::Or, Sort::Bool, std::move(keep));
}
TermP or_(TermP a, TermP b) { return or_(std::vector<TermP>{std::move(a), std::move(b)}); }

TermP not_(TermP a) {
  if (a->kind == Kind::BoolLit) return bool_lit(a->value == 0);
  if (a->kind == Kind::Not) return a->args[0];
  return make(Kind::Not, Sort::Bool, {std::move(a)});
}

TermP implies(TermP a, TermP b) {
  if (is_true(a)) return b;
  if (is_false(a) || is_true(b)) return tru();
  if (is_false(b)) return not_(a);
  return make(Kind::Implies, Sort::Bool, {std::move(a), std::move(b)});
}

TermP ite(TermP c, TermP t, TermP e) {
  if (is_true(c)) return t;
  if (is_false(c)) return e;
  if (equal(t, e)) return t;
  Sort s = t->sort;
  return make(Kind::Ite, s, {std::move(c), std::move(t), std::move(e)});
}

TermP select(TermP arr, TermP idx) {
  return make(Kind::Select, Sort::Int, {std::move(arr), std::move(idx)});
}

TermP store(TermP arr, TermP idx, TermP val) {
  return make(Kind::Store, Sort::IntArray, {std::move(arr), std::move(idx), std::move(val)});
}

TermP forall(std::vector<Binder> binders, TermP body) {
  if (binders.empty() || body->kind == Kind::BoolLit) return body;
  auto t = std::make_shared<Term>();
  t->kind = Kind::Forall;
  t->sort = Sort::Bool;
  t->binders = std::move(binders);
  t->args = {std::move(body)};
  return t;
}

TermP exists(std::vector<Binder> binders, TermP body) {
  if (binders.empty() || body->kind == Kind::BoolLit) return body;
  auto t = std::make_shared<Term>();
  t->kind = Kind::Exists;
  t->sort = Sort::Bool;
  t->binders = std::move(binders);
  t->args = {std::move(body)};
  return t;
}

bool is_true(const TermP& t) { return t->kind == Kind::BoolLit && t->value != 0; }
bool is_false(const TermP& t) { return t->kind == Kind::BoolLit && t->value == 0; }

bool has_quantifier(const TermP& t) {
  if (t->kind == Kind::Forall || t->kind == Kind::Exists) return true;
  for (const auto& a : t->args)
    if (has_quantifier(a)) return true;
  return false;
}

bool is_nonlinear(const TermP& t) {
  if (t->kind == Kind::Mul && t->args[0]->kind != Kind::IntLit &&
      t->args[1]->kind != Kind::IntLit)
    return true;
  if ((t->kind == Kind::Div || t->kind == Kind::Mod) && t->args[1]->kind != Kind::IntLit)
    return true;
  for (const auto& a : t->args)
    if (is_nonlinear(a)) return true;
  return false;
}

bool equal(const TermP& a, const TermP& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->sort != b->sort || a->value != b->value ||
      a->name != b->name || a->args.size() != b->args.size() || a->binders != b->binders)
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

namespace {
void free_vars_rec(const TermP& t, std::map<std::string, Sort>& out,
                   std::vector<std::string>& bound) {
  if (t->kind == Kind::Var) {
    for (const auto& b : bound)
      if (b == t->name) return;
    out.emplace(t->name, t->sort);
    return;
  }
  size_t mark = bound.size();
  for (const auto& b : t->binders) bound.push_back(b.first);
  for (const auto& a : t->args) free_vars_rec(a, out, bound);
  bound.resize(mark);
}
}  // namespace

void free_vars(const TermP& t, std::map<std::string, Sort>& out) {
  std::vector<std::string> bound;
  free_vars_rec(t, out, bound);
}

TermP substitute(const TermP& t, const std::map<std::string, TermP>& m) {
  if (m.empty()) return t;
  switch (t->kind) {
    case Kind::IntLit:
    case Kind::BoolLit: return t;
    case Kind::Var: {
      auto it = m.find(t->name);
      return it == m.end() ? t : it->second;
    }
    case Kind::Forall:
    case Kind::Exists: {
      std::map<std::string, TermP> inner = m;
      for (const auto& b : t->binders) inner.erase(b.first);
      TermP body = substitute(t->args[0], inner);
      return t->kind == Kind::Forall ? forall(t->binders, body) : exists(t->binders, body);
    }
    default: break;
  }
  std::vector<TermP> xs;
  xs.reserve(t->args.size());
  for (const auto& a : t->args) xs.push_back(substitute(a, m));
  switch (t->kind) {
    case Kind::Add: return add(xs[0], xs[1]);
    case Kind::Sub: return sub(xs[0], xs[1]);
    case Kind::Mul: return mul(xs[0], xs[1]);
    case Kind::Neg: return neg(xs[0]);
    case Kind::Div: return div(xs[0], xs[1]);
    case Kind::Mod: return mod(xs[0], xs[1]);
    case Kind::Lt: return lt(xs[0], xs[1]);
    case Kind::Le: return le(xs[0], xs[1]);
    case Kind::Eq: return eq(xs[0], xs[1]);
    case Kind::Ge: return ge(xs[0], xs[1]);
    case Kind::Gt: return gt(xs[0], xs[1]);
    case Kind::And: return and_(xs);
    case Kind::Or: return or_(xs);
    case Kind::Not: return not_(xs[0]);
    case Kind::Implies: return implies(xs[0], xs[1]);
    case Kind::Ite: return ite(xs[0], xs[1], xs[2]);
    case Kind::Select: return select(xs[0], xs[1]);
    case Kind::Store: return store(xs[0], xs[1], xs[2]);
    default: return t;
  }
}

std::string emit(const TermP& t) {
  std::ostringstream os;
  emit_to(t, os);
  return os.str();
}

std::string FreshNames::fresh(const std::string& base) {
  int k = counters_[base]++;
  return base + "!" + std::to_string(k);
}

}  // namespace tileproof::smt
