// Typed AST for the restricted loop language.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tileproof::frontend {

struct SrcLoc {
  int line = 0;
  int col = 0;
};

enum class Op {
  Int,
  Bool,
  Var,
  Read,  // name[args[0]]
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Lt,
  Le,
  Eq,
  Ne,
  Ge,
  Gt,
  And,
  Or,
  Not,
  Implies,
};

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::Int;
  int64_t value = 0;  // Int literal, or 0/1 for Bool
  std::string name;   // Var, Read
  std::vector<ExprP> args;
  SrcLoc loc;
};

ExprP mk_int(int64_t v, SrcLoc loc = {});
ExprP mk_bool(bool b, SrcLoc loc = {});
ExprP mk_var(const std::string& name, SrcLoc loc = {});
ExprP mk_read(const std::string& array, ExprP index, SrcLoc loc = {});
ExprP mk_un(Op op, ExprP a, SrcLoc loc = {});
ExprP mk_bin(Op op, ExprP a, ExprP b, SrcLoc loc = {});

// Folding helpers for generated code; they keep trivial constants out of terms.
ExprP mk_and(const std::vector<ExprP>& xs);
ExprP mk_or(const std::vector<ExprP>& xs);
ExprP mk_not(ExprP a);
ExprP mk_add(ExprP a, ExprP b);
ExprP mk_sub(ExprP a, ExprP b);

bool is_bool_op(Op op);
bool is_relational(Op op);
bool is_bool_expr(const ExprP& e);

// Structural equality, ignoring source locations.
bool equal(const ExprP& a, const ExprP& b);

ExprP substitute(const ExprP& e, const std::map<std::string, ExprP>& scalars);

void collect_vars(const ExprP& e, std::set<std::string>& scalars,
                  std::set<std::string>& arrays);

// Index expressions of every array read in e, in pre-order.
void collect_reads(const ExprP& e,
                   std::vector<std::pair<std::string, ExprP>>& out);

bool mentions(const ExprP& e, const std::string& name);

enum class StmtKind { Skip, Assign, Store, Assume, If, For, Seq };

struct Stmt;
using StmtP = std::shared_ptr<const Stmt>;

/// How a normalized loop counter maps back to the source loop variable:
/// source = offset + dir * counter.
struct LoopOrigin {
  int64_t offset = 0;
  int dir = 1;
  bool desugared = false;  // general loop rewritten with a fresh counter
  std::string source_var;
  ExprP source_offset;  // symbolic offset when the bound was not constant
};

struct Stmt {
  StmtKind kind = StmtKind::Skip;
  std::string var;  // Assign target, Store array, For counter
  ExprP index;      // Store index
  ExprP expr;       // rhs, condition, or trip count
  std::vector<StmtP> children;  // Seq items; If {then, else}; For {body}
  LoopOrigin origin;
  SrcLoc loc;
};

StmtP mk_skip(SrcLoc loc = {});
StmtP mk_assign(const std::string& v, ExprP rhs, SrcLoc loc = {});
StmtP mk_store(const std::string& a, ExprP idx, ExprP rhs, SrcLoc loc = {});
StmtP mk_assume(ExprP cond, SrcLoc loc = {});
StmtP mk_if(ExprP cond, StmtP then_s, StmtP else_s, SrcLoc loc = {});
StmtP mk_for(const std::string& counter, ExprP trip, StmtP body,
             SrcLoc loc = {}, LoopOrigin origin = {});
StmtP mk_seq(std::vector<StmtP> items, SrcLoc loc = {});

bool equal(const StmtP& a, const StmtP& b);

/// Scalars and arrays written anywhere inside s (counters included).
void write_set(const StmtP& s, std::set<std::string>& scalars,
               std::set<std::string>& arrays);

/// For statements in pre-order.
std::vector<StmtP> loops_preorder(const StmtP& s);

/// forall vars :: range ==> body
struct QuantAssertion {
  std::vector<std::string> vars;
  ExprP range;
  ExprP body;
};

bool equal(const QuantAssertion& a, const QuantAssertion& b);
QuantAssertion trivial_assertion();

struct ArrayDecl {
  std::string name;
  ExprP size;
};

struct Program {
  std::string name;
  std::vector<std::string> params;  // symbolic sizes, assumed >= 1, read-only
  std::vector<std::string> scalars;
  std::set<std::string> loop_counters;
  std::vector<ArrayDecl> arrays;
  StmtP body;
  QuantAssertion pre;
  QuantAssertion post;

  bool is_param(const std::string& n) const;
  bool is_scalar(const std::string& n) const;  // params count as scalars
  bool is_array(const std::string& n) const;
  const ArrayDecl* array(const std::string& n) const;
};

bool equal(const Program& a, const Program& b);

}  // namespace tileproof::frontend
