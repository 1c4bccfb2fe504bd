#include "tileproof/vcgen/lower.hpp"

#include <set>

namespace tileproof::vcgen {

using frontend::Op;

TermP Env::scalar(const std::string& n) const {
  auto it = scalars.find(n);
  return it == scalars.end() ? smt::var(n) : it->second;
}

TermP Env::array(const std::string& n) const {
  auto it = arrays.find(n);
  return it == arrays.end() ? smt::array_var(n) : it->second;
}

TermP lower(const ExprP& e, const Env& env, std::vector<TermP>* guards) {
  auto L = [&](size_t i) { return lower(e->args[i], env, guards); };
  switch (e->op) {
    case Op::Int: return smt::int_lit(e->value);
    case Op::Bool: return smt::bool_lit(e->value != 0);
    case Op::Var: return env.scalar(e->name);
    case Op::Read: return smt::select(env.array(e->name), L(0));
    case Op::Neg: return smt::neg(L(0));
    case Op::Add: return smt::add(L(0), L(1));
    case Op::Sub: return smt::sub(L(0), L(1));
    case Op::Mul: return smt::mul(L(0), L(1));
    case Op::Div:
    case Op::Mod: {
      TermP a = L(0), b = L(1);
      if (guards && b->kind != smt::Kind::IntLit) guards->push_back(smt::ne(b, smt::int_lit(0)));
      return e->op == Op::Div ? smt::div(a, b) : smt::mod(a, b);
    }
    case Op::Lt: return smt::lt(L(0), L(1));
    case Op::Le: return smt::le(L(0), L(1));
    case Op::Eq: return smt::eq(L(0), L(1));
    case Op::Ne: return smt::ne(L(0), L(1));
    case Op::Ge: return smt::ge(L(0), L(1));
    case Op::Gt: return smt::gt(L(0), L(1));
    case Op::And: return smt::and_(L(0), L(1));
    case Op::Or: return smt::or_(L(0), L(1));
    case Op::Not: return smt::not_(L(0));
    case Op::Implies: return smt::implies(L(0), L(1));
  }
  return smt::tru();
}

TermP lower(const ExprP& e) { return lower(e, Env{}, nullptr); }

std::vector<ExprP> global_assumptions(const frontend::Program& p) {
  std::vector<ExprP> out;
  for (const auto& n : p.params) out.push_back(frontend::mk_bin(Op::Ge, frontend::mk_var(n), frontend::mk_int(1)));
  std::set<std::string> ws, wa;
  frontend::write_set(p.body, ws, wa);
  std::vector<frontend::StmtP> top;
  if (p.body->kind == frontend::StmtKind::Seq) top = p.body->children;
  else top.push_back(p.body);
  for (const auto& st : top) {
    if (st->kind == frontend::StmtKind::For) break;
    if (st->kind != frontend::StmtKind::Assume) continue;
    std::set<std::string> vs, as;
    frontend::collect_vars(st->expr, vs, as);
    bool stable = true;
    for (const auto& v : vs) stable = stable && !ws.count(v);
    for (const auto& a : as) stable = stable && !wa.count(a);
    if (stable) out.push_back(st->expr);
  }
  return out;
}

std::vector<TermP> lower_all(const std::vector<ExprP>& es) {
  std::vector<TermP> out;
  for (const auto& e : es) out.push_back(lower(e));
  return out;
}

}  // namespace tileproof::vcgen
