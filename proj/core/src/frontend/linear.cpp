#include "tileproof/frontend/linear.hpp"

#include <cstdlib>

#include "tileproof/frontend/printer.hpp"

namespace tileproof::frontend {

int64_t ediv(int64_t a, int64_t b) {
  int64_t q = a / b;
  int64_t r = a % b;
  if (r < 0) q += (b > 0) ? -1 : 1;
  return q;
}

int64_t emod(int64_t a, int64_t b) {
  int64_t r = a % b;
  if (r < 0) r += (b > 0) ? b : -b;
  return r;
}

namespace {

void add_term(Linear& l, const std::string& key, int64_t c, const ExprP& atom) {
  if (c == 0) return;
  auto it = l.terms.find(key);
  if (it == l.terms.end()) {
    l.terms.emplace(key, std::make_pair(c, atom));
    return;
  }
  it->second.first += c;
  if (it->second.first == 0) l.terms.erase(it);
}

Linear scale(const Linear& l, int64_t k) {
  Linear r;
  if (k == 0) return r;
  for (const auto& [key, t] : l.terms) r.terms.emplace(key, std::make_pair(t.first * k, t.second));
  r.constant = l.constant * k;
  return r;
}

Linear plus(const Linear& a, const Linear& b, int64_t sign) {
  Linear r = a;
  for (const auto& [key, t] : b.terms) add_term(r, key, sign * t.first, t.second);
  r.constant += sign * b.constant;
  return r;
}

Linear atom(const ExprP& e) {
  Linear r;
  add_term(r, to_string(e), 1, e);
  return r;
}

}  // namespace

Linear linearize(const ExprP& e) {
  switch (e->op) {
    case Op::Int: {
      Linear r;
      r.constant = e->value;
      return r;
    }
    case Op::Var: return atom(e);
    case Op::Read: return atom(mk_read(e->name, normalize(e->args[0])));
    case Op::Neg: return scale(linearize(e->args[0]), -1);
    case Op::Add: return plus(linearize(e->args[0]), linearize(e->args[1]), 1);
    case Op::Sub: return plus(linearize(e->args[0]), linearize(e->args[1]), -1);
    case Op::Mul: {
      Linear a = linearize(e->args[0]);
      Linear b = linearize(e->args[1]);
      if (a.is_constant()) return scale(b, a.constant);
      if (b.is_constant()) return scale(a, b.constant);
      return atom(mk_bin(Op::Mul, from_linear(a), from_linear(b)));
    }
    case Op::Div:
    case Op::Mod: {
      Linear a = linearize(e->args[0]);
      Linear b = linearize(e->args[1]);
      if (a.is_constant() && b.is_constant() && b.constant != 0) {
        Linear r;
        r.constant = e->op == Op::Div ? ediv(a.constant, b.constant)
                                      : emod(a.constant, b.constant);
        return r;
      }
      return atom(mk_bin(e->op, from_linear(a), from_linear(b)));
    }
    default:
      return atom(e);
  }
}

ExprP from_linear(const Linear& l) {
  ExprP acc;
  for (const auto& [key, t] : l.terms) {
    int64_t c = t.first;
    const ExprP& a = t.second;
    if (!acc) {
      if (c == 1) acc = a;
      else if (c == -1) acc = mk_un(Op::Neg, a);
      else acc = mk_bin(Op::Mul, mk_int(c), a);
      continue;
    }
    int64_t m = c < 0 ? -c : c;
    ExprP term = m == 1 ? a : mk_bin(Op::Mul, mk_int(m), a);
    acc = mk_bin(c < 0 ? Op::Sub : Op::Add, acc, term);
  }
  if (!acc) return mk_int(l.constant);
  if (l.constant > 0) acc = mk_bin(Op::Add, acc, mk_int(l.constant));
  if (l.constant < 0) acc = mk_bin(Op::Sub, acc, mk_int(-l.constant));
  return acc;
}

ExprP normalize(const ExprP& e) {
  if (!is_bool_expr(e)) return from_linear(linearize(e));
  switch (e->op) {
    case Op::Bool: return e;
    case Op::Not: return mk_not(normalize(e->args[0]));
    case Op::And: return mk_and({normalize(e->args[0]), normalize(e->args[1])});
    case Op::Or: return mk_or({normalize(e->args[0]), normalize(e->args[1])});
    case Op::Implies: {
      ExprP a = normalize(e->args[0]);
      ExprP b = normalize(e->args[1]);
      if (a->op == Op::Bool) return a->value ? b : mk_bool(true);
      return mk_bin(Op::Implies, a, b);
    }
    default: {
      ExprP a = normalize(e->args[0]);
      ExprP b = normalize(e->args[1]);
      if (a->op == Op::Int && b->op == Op::Int) {
        int64_t x = a->value, y = b->value;
        bool r = false;
        switch (e->op) {
          case Op::Lt: r = x < y; break;
          case Op::Le: r = x <= y; break;
          case Op::Eq: r = x == y; break;
          case Op::Ne: r = x != y; break;
          case Op::Ge: r = x >= y; break;
          case Op::Gt: r = x > y; break;
          default: break;
        }
        return mk_bool(r);
      }
      return mk_bin(e->op, a, b);
    }
  }
}

std::optional<Affine> affine_in(const ExprP& e, const std::string& var) {
  Linear l = linearize(e);
  Affine a;
  for (const auto& [key, t] : l.terms) {
    if (key == var) {
      a.coeff = t.first;
      continue;
    }
    if (mentions(t.second, var)) return std::nullopt;
    a.rest.terms.emplace(key, t);
  }
  a.rest.constant = l.constant;
  return a;
}

}  // namespace tileproof::frontend
