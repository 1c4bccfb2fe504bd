#include "tileproof/frontend/desugar.hpp"

#include "tileproof/frontend/linear.hpp"

namespace tileproof::frontend {

namespace {

StmtP subst_stmt(const StmtP& s, const std::map<std::string, ExprP>& m) {
  switch (s->kind) {
    case StmtKind::Skip: return s;
    case StmtKind::Assign: return mk_assign(s->var, substitute(s->expr, m), s->loc);
    case StmtKind::Store:
      return mk_store(s->var, substitute(s->index, m), substitute(s->expr, m), s->loc);
    case StmtKind::Assume: return mk_assume(substitute(s->expr, m), s->loc);
    case StmtKind::If:
      return mk_if(substitute(s->expr, m), subst_stmt(s->children[0], m),
                   subst_stmt(s->children[1], m), s->loc);
    case StmtKind::For:
      return mk_for(s->var, substitute(s->expr, m), subst_stmt(s->children[0], m), s->loc,
                    s->origin);
    case StmtKind::Seq: {
      std::vector<StmtP> items;
      for (const auto& c : s->children) items.push_back(subst_stmt(c, m));
      return mk_seq(std::move(items), s->loc);
    }
  }
  return s;
}

bool is_var(const ExprP& e, const std::string& v) {
  return e->op == Op::Var && e->name == v;
}

}  // namespace

StmtP desugar_general_loop(const std::string& var, const ExprP& init,
                           const ExprP& cond, const StmtP& step,
                           const ExprP& trip_count, const StmtP& body,
                           const std::string& counter) {
  StmtP first = mk_if(mk_bin(Op::Eq, mk_var(counter), mk_int(0)),
                      mk_assign(var, init, body->loc), mk_skip());
  StmtP guarded = mk_if(cond, mk_seq({body, step}), mk_skip());
  LoopOrigin origin;
  origin.desugared = true;
  origin.source_var = var;
  return mk_for(counter, trip_count, mk_seq({first, guarded}), body->loc, origin);
}

std::optional<StmtP> normalize_counted_loop(const std::string& var,
                                            const ExprP& init,
                                            const ExprP& cond, int64_t step,
                                            const StmtP& body, SrcLoc loc) {
  if (step != 1 && step != -1) return std::nullopt;
  if (mentions(init, var) || cond->args.size() != 2) return std::nullopt;
  const ExprP& lhs = cond->args[0];
  const ExprP& rhs = cond->args[1];
  // Canonical view: var OP bound.
  Op op = cond->op;
  ExprP bound;
  if (is_var(lhs, var) && !mentions(rhs, var)) {
    bound = rhs;
  } else if (is_var(rhs, var) && !mentions(lhs, var)) {
    bound = lhs;
    switch (op) {
      case Op::Lt: op = Op::Gt; break;
      case Op::Le: op = Op::Ge; break;
      case Op::Gt: op = Op::Lt; break;
      case Op::Ge: op = Op::Le; break;
      default: return std::nullopt;
    }
  } else {
    return std::nullopt;
  }

  ExprP trip;
  ExprP replacement;
  LoopOrigin origin;
  origin.source_var = var;
  origin.source_offset = init;
  if (init->op == Op::Int) origin.offset = init->value;
  if (step == 1) {
    if (op == Op::Lt) trip = mk_sub(bound, init);
    else if (op == Op::Le) trip = mk_add(mk_sub(bound, init), mk_int(1));
    else return std::nullopt;
    replacement = mk_add(mk_var(var), init);
    origin.dir = 1;
  } else {
    if (op == Op::Gt) trip = mk_sub(init, bound);
    else if (op == Op::Ge) trip = mk_add(mk_sub(init, bound), mk_int(1));
    else return std::nullopt;
    replacement = mk_sub(init, mk_var(var));
    origin.dir = -1;
  }
  StmtP new_body = body;
  if (!(step == 1 && init->op == Op::Int && init->value == 0))
    new_body = subst_stmt(body, {{var, replacement}});
  return mk_for(var, normalize(trip), new_body, loc, origin);
}

}  // namespace tileproof::frontend
