#include "tileproof/frontend/validator.hpp"

#include <set>

namespace tileproof::frontend {

namespace {

class Validator {
 public:
  explicit Validator(const Program& p) : p_(p) {}

  std::vector<Diagnostic> run() {
    std::set<std::string> seen;
    for (const auto& n : p_.params) seen.insert(n);
    for (const auto& n : p_.scalars)
      if (!seen.insert(n).second) error({}, "redeclaration of '" + n + "'");
    for (const auto& a : p_.arrays) {
      if (!seen.insert(a.name).second) error({}, "redeclaration of '" + a.name + "'");
      std::set<std::string> sv, av;
      check_int(a.size, {});
      collect_vars(a.size, sv, av);
      for (const auto& v : sv)
        if (!p_.is_param(v))
          error(a.size->loc, "array size of '" + a.name + "' may only use parameters");
    }
    for (const auto& c : p_.loop_counters)
      if (!p_.is_scalar(c) || p_.is_param(c))
        error({}, "loop counter '" + c + "' is not a declared scalar");

    check_assertion(p_.pre, "requires");
    check_assertion(p_.post, "ensures");
    if (p_.body) stmt(p_.body, {});
    return std::move(diags_);
  }

 private:
  const Program& p_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> bound_;  // quantified index variables in scope

  void error(SrcLoc loc, std::string msg) { diags_.push_back({loc, std::move(msg), false}); }
  void warn(SrcLoc loc, std::string msg) { diags_.push_back({loc, std::move(msg), true}); }

  bool scalar_visible(const std::string& n) const {
    return bound_.count(n) || p_.is_scalar(n);
  }

  void check_int(const ExprP& e, const std::set<std::string>& active) {
    switch (e->op) {
      case Op::Int: return;
      case Op::Bool: error(e->loc, "boolean literal used as an integer"); return;
      case Op::Var:
        if (p_.is_array(e->name))
          error(e->loc, "array '" + e->name + "' used without an index");
        else if (!scalar_visible(e->name))
          error(e->loc, "use of undeclared identifier '" + e->name + "'");
        else if (p_.loop_counters.count(e->name) && !bound_.count(e->name) &&
                 !active.count(e->name))
          error(e->loc, "loop counter '" + e->name + "' used outside its loop");
        return;
      case Op::Read:
        if (!p_.is_array(e->name)) {
          error(e->loc, p_.is_scalar(e->name) ? "'" + e->name + "' is not an array"
                                              : "use of undeclared identifier '" + e->name + "'");
        }
        check_int(e->args[0], active);
        return;
      case Op::Neg: check_int(e->args[0], active); return;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Mod:
        check_int(e->args[0], active);
        check_int(e->args[1], active);
        if ((e->op == Op::Div || e->op == Op::Mod) && e->args[1]->op == Op::Int &&
            e->args[1]->value == 0)
          warn(e->loc, "division by zero");
        return;
      default: error(e->loc, "boolean expression used as an integer"); return;
    }
  }

  void check_bool(const ExprP& e, const std::set<std::string>& active) {
    switch (e->op) {
      case Op::Bool: return;
      case Op::Lt:
      case Op::Le:
      case Op::Eq:
      case Op::Ne:
      case Op::Ge:
      case Op::Gt:
        check_int(e->args[0], active);
        check_int(e->args[1], active);
        return;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        check_bool(e->args[0], active);
        check_bool(e->args[1], active);
        return;
      case Op::Not: check_bool(e->args[0], active); return;
      default: error(e->loc, "integer expression used as a condition"); return;
    }
  }

  void check_assertion(const QuantAssertion& q, const std::string& what) {
    for (const auto& v : q.vars) {
      if (p_.is_scalar(v) || p_.is_array(v))
        error(q.body->loc, what + ": index variable '" + v + "' shadows a declaration");
    }
    bound_.insert(q.vars.begin(), q.vars.end());
    check_bool(q.range, {});
    check_bool(q.body, {});
    std::set<std::string> sv, av;
    collect_vars(q.range, sv, av);
    if (!av.empty()) error(q.range->loc, what + ": range may not read arrays");
    bound_.clear();
  }

  void stmt(const StmtP& s, const std::set<std::string>& active) {
    switch (s->kind) {
      case StmtKind::Skip: return;
      case StmtKind::Assign:
        if (p_.is_array(s->var)) {
          error(s->loc, "array '" + s->var + "' assigned without an index");
        } else if (!p_.is_scalar(s->var)) {
          error(s->loc, "use of undeclared identifier '" + s->var + "'");
        } else if (p_.is_param(s->var)) {
          error(s->loc, "parameter '" + s->var + "' is read-only");
        } else if (p_.loop_counters.count(s->var)) {
          error(s->loc, "counter-discipline violation: loop counter '" + s->var +
                            "' assigned outside its loop header");
        }
        check_int(s->expr, active);
        return;
      case StmtKind::Store:
        if (!p_.is_array(s->var))
          error(s->loc, p_.is_scalar(s->var) ? "'" + s->var + "' is not an array"
                                             : "use of undeclared identifier '" + s->var + "'");
        check_int(s->index, active);
        check_int(s->expr, active);
        return;
      case StmtKind::Assume: check_bool(s->expr, active); return;
      case StmtKind::If:
        check_bool(s->expr, active);
        stmt(s->children[0], active);
        stmt(s->children[1], active);
        return;
      case StmtKind::Seq:
        for (const auto& c : s->children) stmt(c, active);
        return;
      case StmtKind::For: {
        const std::string& c = s->var;
        if (!p_.is_scalar(c) || p_.is_param(c))
          error(s->loc, "loop counter '" + c + "' is not a declared scalar");
        else if (!p_.loop_counters.count(c))
          error(s->loc, "loop counter '" + c + "' is not registered as a counter");
        if (active.count(c))
          error(s->loc, "nested loops share counter '" + c + "'");
        check_int(s->expr, active);
        std::set<std::string> ws, wa;
        write_set(s->children[0], ws, wa);
        ws.insert(c);
        std::set<std::string> rs, ra;
        collect_vars(s->expr, rs, ra);
        for (const auto& v : rs)
          if (ws.count(v))
            error(s->expr->loc, "trip count depends on '" + v + "', which the loop writes");
        for (const auto& a : ra)
          if (wa.count(a))
            error(s->expr->loc, "trip count reads array '" + a + "', which the loop writes");
        auto inner = active;
        inner.insert(c);
        stmt(s->children[0], inner);
        return;
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return Validator(p).run(); }

bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (!d.warning) return true;
  return false;
}

}  // namespace tileproof::frontend
