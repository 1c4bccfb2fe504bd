#include "tileproof/frontend/printer.hpp"

#include <sstream>

namespace tileproof::frontend {

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    case Op::Lt: case Op::Le: case Op::Eq: case Op::Ne: case Op::Ge: case Op::Gt:
      return 5;
    case Op::Add: case Op::Sub: return 6;
    case Op::Mul: case Op::Div: case Op::Mod: return 7;
    case Op::Neg: return 8;
    default: return 9;
  }
}

const char* sym(Op op) {
  switch (op) {
    case Op::Implies: return "==>";
    case Op::Or: return "||";
    case Op::And: return "&&";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Ge: return ">=";
    case Op::Gt: return ">";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Mod: return "%";
    default: return "?";
  }
}

void print(std::ostream& os, const ExprP& e, int ctx) {
  int p = prec(e->op);
  if (e->op == Op::Int && e->value < 0) p = 8;
  bool paren = p < ctx;
  if (paren) os << '(';
  switch (e->op) {
    case Op::Int: os << e->value; break;
    case Op::Bool: os << (e->value ? "true" : "false"); break;
    case Op::Var: os << e->name; break;
    case Op::Read:
      os << e->name << '[';
      print(os, e->args[0], 0);
      os << ']';
      break;
    case Op::Neg:
      os << '-';
      print(os, e->args[0], 9);
      break;
    case Op::Not:
      os << '!';
      print(os, e->args[0], 9);
      break;
    case Op::Implies:
      print(os, e->args[0], p + 1);
      os << ' ' << sym(e->op) << ' ';
      print(os, e->args[1], p);
      break;
    default:
      if (is_relational(e->op)) {
        print(os, e->args[0], p + 1);
        os << ' ' << sym(e->op) << ' ';
        print(os, e->args[1], p + 1);
      } else {
        print(os, e->args[0], p);
        os << ' ' << sym(e->op) << ' ';
        print(os, e->args[1], p + 1);
      }
      break;
  }
  if (paren) os << ')';
}

void pad(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "  ";
}

void print_block(std::ostream& os, const StmtP& s, int indent);

void print_stmt(std::ostream& os, const StmtP& s, int indent) {
  switch (s->kind) {
    case StmtKind::Skip:
      pad(os, indent);
      os << "skip;\n";
      break;
    case StmtKind::Assign:
      pad(os, indent);
      os << s->var << " = " << to_string(s->expr) << ";\n";
      break;
    case StmtKind::Store:
      pad(os, indent);
      os << s->var << '[' << to_string(s->index) << "] = " << to_string(s->expr) << ";\n";
      break;
    case StmtKind::Assume:
      pad(os, indent);
      os << "assume(" << to_string(s->expr) << ");\n";
      break;
    case StmtKind::If:
      pad(os, indent);
      os << "if (" << to_string(s->expr) << ") {\n";
      print_block(os, s->children[0], indent + 1);
      pad(os, indent);
      if (s->children[1]->kind != StmtKind::Skip) {
        os << "} else {\n";
        print_block(os, s->children[1], indent + 1);
        pad(os, indent);
      }
      os << "}\n";
      break;
    case StmtKind::For:
      pad(os, indent);
      os << "for (" << s->var << " = 0; " << s->var << " < " << to_string(s->expr)
         << "; " << s->var << " = " << s->var << " + 1) {\n";
      print_block(os, s->children[0], indent + 1);
      pad(os, indent);
      os << "}\n";
      break;
    case StmtKind::Seq:
      for (const auto& c : s->children) print_stmt(os, c, indent);
      break;
  }
}

void print_block(std::ostream& os, const StmtP& s, int indent) {
  if (s->kind == StmtKind::Skip) return;
  print_stmt(os, s, indent);
}

void print_list(std::ostream& os, const std::vector<std::string>& xs) {
  for (size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
}

}  // namespace

std::string to_string(const ExprP& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::string to_string(const QuantAssertion& q) {
  std::ostringstream os;
  bool range_true = q.range->op == Op::Bool && q.range->value;
  if (q.vars.empty() && range_true) {
    print(os, q.body, 1);
    return os.str();
  }
  os << "forall ";
  print_list(os, q.vars);
  os << " :: ";
  print(os, q.range, 2);
  os << " ==> ";
  print(os, q.body, 1);
  return os.str();
}

std::string to_string(const StmtP& s, int indent) {
  std::ostringstream os;
  print_stmt(os, s, indent);
  return os.str();
}

std::string to_string(const Program& p) {
  std::ostringstream os;
  if (!p.name.empty()) os << "program " << p.name << ";\n";
  if (!p.params.empty()) {
    os << "param ";
    print_list(os, p.params);
    os << ";\n";
  }
  if (!p.scalars.empty()) {
    os << "int ";
    print_list(os, p.scalars);
    os << ";\n";
  }
  for (const auto& a : p.arrays)
    os << "int " << a.name << '[' << to_string(a.size) << "];\n";
  if (!equal(p.pre, trivial_assertion())) os << "requires " << to_string(p.pre) << ";\n";
  os << "ensures " << to_string(p.post) << ";\n";
  if (p.body) print_block(os, p.body, 0);
  return os.str();
}

}  // namespace tileproof::frontend
