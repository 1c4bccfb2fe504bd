// Many-sorted terms over integers, booleans and Int->Int arrays, plus
// SMT-LIB2 emission.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tileproof::smt {

enum class Sort { Int, Bool, IntArray };

enum class Kind {
  IntLit,
  BoolLit,
  Var,
  Add,
  Sub,
  Mul,
  Neg,
  Div,
  Mod,
  Lt,
  Le,
  Eq,
  Ge,
  Gt,
  And,
  Or,
  Not,
  Implies,
  Ite,
  Select,
  Store,
  Forall,
  Exists,
};

struct Term;
using TermP = std::shared_ptr<const Term>;
using Binder = std::pair<std::string, Sort>;

struct Term {
  Kind kind = Kind::IntLit;
  Sort sort = Sort::Int;
  int64_t value = 0;
  std::string name;
  std::vector<TermP> args;
  std::vector<Binder> binders;  // Forall / Exists
};

const char* sort_name(Sort s);

TermP int_lit(int64_t v);
TermP bool_lit(bool b);
TermP tru();
TermP fls();
TermP var(const std::string& name, Sort s = Sort::Int);
TermP array_var(const std::string& name);

// Builders fold literal constants; they do not otherwise rewrite.
TermP add(TermP a, TermP b);
TermP add(const std::vector<TermP>& xs);
TermP sub(TermP a, TermP b);
TermP mul(TermP a, TermP b);
TermP neg(TermP a);
TermP div(TermP a, TermP b);
TermP mod(TermP a, TermP b);
TermP lt(TermP a, TermP b);
TermP le(TermP a, TermP b);
TermP eq(TermP a, TermP b);
TermP ne(TermP a, TermP b);
TermP ge(TermP a, TermP b);
TermP gt(TermP a, TermP b);
TermP and_(const std::vector<TermP>& xs);
TermP and_(TermP a, TermP b);
TermP or_(const std::vector<TermP>& xs);
TermP or_(TermP a, TermP b);
TermP not_(TermP a);
TermP implies(TermP a, TermP b);
TermP ite(TermP c, TermP t, TermP e);
TermP select(TermP arr, TermP idx);
TermP store(TermP arr, TermP idx, TermP val);
TermP forall(std::vector<Binder> binders, TermP body);
TermP exists(std::vector<Binder> binders, TermP body);

bool is_true(const TermP& t);
bool is_false(const TermP& t);
bool has_quantifier(const TermP& t);
bool is_nonlinear(const TermP& t);
bool equal(const TermP& a, const TermP& b);

/// Free variables with their sorts.
void free_vars(const TermP& t, std::map<std::string, Sort>& out);

/// Capture-avoiding only in the sense that bound names shadow the map;
/// callers keep binder names fresh.
TermP substitute(const TermP& t, const std::map<std::string, TermP>& m);

/// SMT-LIB2 text of a single term. Deterministic.
std::string emit(const TermP& t);

/// Fresh names `<base>!<k>`, counters local to one generator.
class FreshNames {
 public:
  std::string fresh(const std::string& base);

 private:
  std::map<std::string, int> counters_;
};

}  // namespace tileproof::smt
