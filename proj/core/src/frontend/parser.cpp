#include "tileproof/frontend/parser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tileproof/frontend/desugar.hpp"
#include "tileproof/frontend/validator.hpp"

namespace tileproof::frontend {

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  std::ostringstream os;
  os << file << ':' << d.loc.line << ':' << d.loc.col << ": "
     << (d.warning ? "warning: " : "") << d.message;
  return os.str();
}

namespace {
std::string summarize(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (!d.warning) return format_diagnostic("<input>", d);
  return ds.empty() ? "frontend error" : format_diagnostic("<input>", ds.front());
}
}  // namespace

FrontendError::FrontendError(std::vector<Diagnostic> diags)
    : std::runtime_error(summarize(diags)), diags_(std::move(diags)) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t value = 0;
  SrcLoc loc;
};

[[noreturn]] void fail(SrcLoc loc, const std::string& msg) {
  throw FrontendError({Diagnostic{loc, msg, false}});
}

std::vector<Token> lex(const std::string& src) {
  static const char* kPuncts[] = {"==>", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
                                  "--",  "+=", "-=", "(",  ")",  "{",  "}",  "[",  "]",
                                  ";",   ",",  "=",  "<",  ">",  "+",  "-",  "*",  "/",
                                  "%",   "!"};
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      SrcLoc start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) fail(start, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = src.substr(i, j - i);
      try {
        t.value = std::stoll(t.text);
      } catch (const std::exception&) {
        fail(t.loc, "integer literal out of range: " + t.text);
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      std::string s(p);
      if (src.compare(i, s.size(), s) == 0) {
        t.kind = Tok::Punct;
        t.text = s;
        advance(s.size());
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched) fail(t.loc, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"program", "param",  "int",  "requires", "ensures",
                                         "forall",  "assume", "if",   "else",     "for",
                                         "bound",   "skip",   "true", "false"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    p.pre = trivial_assertion();
    p.post = trivial_assertion();
    bool have_post = false, have_pre = false;
    std::vector<StmtP> body;
    if (is_kw("program")) {
      next();
      p.name = ident("program name");
      expect(";");
    }
    while (peek().kind != Tok::End) {
      if (is_kw("param")) {
        next();
        do {
          SrcLoc loc = peek().loc;
          std::string n = ident("parameter name");
          declare(n, loc);
          p.params.push_back(n);
        } while (accept(","));
        expect(";");
      } else if (is_kw("int")) {
        next();
        do {
          SrcLoc loc = peek().loc;
          std::string n = ident("variable name");
          declare(n, loc);
          if (accept("[")) {
            ExprP size = expr();
            expect("]");
            p.arrays.push_back({n, size});
          } else {
            p.scalars.push_back(n);
          }
        } while (accept(","));
        expect(";");
      } else if (is_kw("requires") || is_kw("ensures")) {
        bool pre = peek().text == "requires";
        SrcLoc loc = peek().loc;
        next();
        QuantAssertion q = assertion();
        expect(";");
        if (pre) {
          if (have_pre) fail(loc, "duplicate requires clause");
          have_pre = true;
          p.pre = q;
        } else {
          if (have_post) fail(loc, "duplicate ensures clause");
          have_post = true;
          p.post = q;
        }
      } else {
        body.push_back(stmt());
      }
    }
    if (!have_post) fail(peek().loc, "missing ensures clause");
    p.body = block_of(std::move(body), {1, 1});
    for (const auto& c : fresh_counters_) {
      declared_.insert(c);
      p.scalars.push_back(c);
    }
    // Counters of unit-step loops may be left undeclared, as in `for (int i ...)`.
    for (const auto& loop : loops_preorder(p.body)) {
      p.loop_counters.insert(loop->var);
      if (!declared_.count(loop->var)) {
        declared_.insert(loop->var);
        p.scalars.push_back(loop->var);
      }
    }
    return p;
  }

  ExprP expr_only() {
    ExprP e = implies_expr();
    if (peek().kind != Tok::End) fail(peek().loc, "unexpected '" + peek().text + "'");
    return e;
  }

  QuantAssertion assertion_only() {
    QuantAssertion q = assertion();
    if (peek().kind != Tok::End) fail(peek().loc, "unexpected '" + peek().text + "'");
    return q;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::set<std::string> declared_;
  std::vector<std::string> fresh_counters_;

  const Token& peek(size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const std::string& s, size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == s;
  }
  bool is_kw(const std::string& s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  bool accept(const std::string& s) {
    if (is_punct(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!accept(s)) {
      const Token& t = peek();
      fail(t.loc, "expected '" + s + "' but found " +
                      (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
    }
  }
  std::string ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text))
      fail(t.loc, "expected " + what);
    next();
    return t.text;
  }
  void declare(const std::string& n, SrcLoc loc) {
    if (!declared_.insert(n).second) fail(loc, "redeclaration of '" + n + "'");
  }

  static StmtP block_of(std::vector<StmtP> items, SrcLoc loc) {
    std::vector<StmtP> flat;
    for (auto& s : items) {
      if (s->kind == StmtKind::Seq)
        flat.insert(flat.end(), s->children.begin(), s->children.end());
      else
        flat.push_back(s);
    }
    if (flat.empty()) return mk_skip(loc);
    if (flat.size() == 1) return flat[0];
    return mk_seq(std::move(flat), loc);
  }

  QuantAssertion assertion() {
    QuantAssertion q;
    if (is_kw("forall")) {
      next();
      if (!is_punct("::")) {
        do {
          q.vars.push_back(ident("index variable"));
        } while (accept(","));
      }
      expect("::");
      ExprP first = or_expr();
      if (accept("==>")) {
        q.range = first;
        q.body = implies_expr();
      } else {
        q.range = mk_bool(true);
        q.body = first;
      }
    } else {
      q.range = mk_bool(true);
      q.body = implies_expr();
    }
    return q;
  }

  StmtP stmt() {
    const Token& t = peek();
    SrcLoc loc = t.loc;
    if (is_punct("{")) {
      next();
      std::vector<StmtP> items;
      while (!is_punct("}")) {
        if (peek().kind == Tok::End) fail(peek().loc, "expected '}'");
        items.push_back(stmt());
      }
      next();
      return block_of(std::move(items), loc);
    }
    if (is_kw("skip")) {
      next();
      expect(";");
      return mk_skip(loc);
    }
    if (is_kw("assume")) {
      next();
      expect("(");
      ExprP c = implies_expr();
      expect(")");
      expect(";");
      return mk_assume(c, loc);
    }
    if (is_kw("if")) {
      next();
      expect("(");
      ExprP c = implies_expr();
      expect(")");
      StmtP th = stmt();
      StmtP el = mk_skip(loc);
      if (is_kw("else")) {
        next();
        el = stmt();
      }
      return mk_if(c, th, el, loc);
    }
    if (is_kw("for")) return for_stmt();
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      std::string n = ident("statement");
      if (accept("[")) {
        ExprP idx = expr();
        expect("]");
        expect("=");
        ExprP rhs = expr();
        expect(";");
        return mk_store(n, idx, rhs, loc);
      }
      StmtP s = simple_update(n, loc);
      expect(";");
      return s;
    }
    fail(loc, "expected statement but found '" + t.text + "'");
  }

  // n = e | n++ | n-- | n += e | n -= e (n already consumed)
  StmtP simple_update(const std::string& n, SrcLoc loc) {
    if (accept("=")) return mk_assign(n, expr(), loc);
    if (accept("++")) return mk_assign(n, mk_bin(Op::Add, mk_var(n), mk_int(1)), loc);
    if (accept("--")) return mk_assign(n, mk_bin(Op::Sub, mk_var(n), mk_int(1)), loc);
    if (accept("+=")) return mk_assign(n, mk_bin(Op::Add, mk_var(n), expr()), loc);
    if (accept("-=")) return mk_assign(n, mk_bin(Op::Sub, mk_var(n), expr()), loc);
    fail(peek().loc, "expected assignment to '" + n + "'");
  }

  static std::optional<int64_t> unit_delta(const StmtP& step, const std::string& v) {
    if (step->kind != StmtKind::Assign || step->var != v) return std::nullopt;
    const ExprP& e = step->expr;
    if ((e->op == Op::Add || e->op == Op::Sub) && e->args[0]->op == Op::Var &&
        e->args[0]->name == v && e->args[1]->op == Op::Int) {
      int64_t d = e->args[1]->value;
      return e->op == Op::Add ? d : -d;
    }
    if (e->op == Op::Add && e->args[1]->op == Op::Var && e->args[1]->name == v &&
        e->args[0]->op == Op::Int)
      return e->args[0]->value;
    return std::nullopt;
  }

  StmtP for_stmt() {
    SrcLoc loc = peek().loc;
    next();
    expect("(");
    SrcLoc vloc = peek().loc;
    std::string v = ident("loop variable");
    expect("=");
    ExprP init = expr();
    expect(";");
    ExprP cond = implies_expr();
    expect(";");
    SrcLoc sloc = peek().loc;
    StmtP step;
    if (accept("++") || accept("--")) {
      bool inc = toks_[pos_ - 1].text == "++";
      std::string sv = ident("loop variable");
      step = mk_assign(sv, mk_bin(inc ? Op::Add : Op::Sub, mk_var(sv), mk_int(1)), sloc);
    } else {
      std::string sv = ident("loop variable");
      step = simple_update(sv, sloc);
    }
    expect(")");
    ExprP bound;
    if (is_kw("bound")) {
      next();
      bound = expr();
    }
    StmtP body = stmt();
    if (step->var != v) fail(sloc, "loop step must update '" + v + "'");

    std::set<std::string> ws, wa;
    write_set(body, ws, wa);
    auto delta = unit_delta(step, v);
    if (delta && !bound) {
      if (ws.count(v))
        fail(vloc, "counter-discipline violation: loop counter '" + v +
                       "' is assigned inside the loop body");
      auto loop = normalize_counted_loop(v, init, cond, *delta, body, loc);
      if (loop) return *loop;
    }
    if (!bound)
      fail(loc, "loop over '" + v + "' is not a unit-step counted loop; add a 'bound' clause");
    std::string counter = "__l" + std::to_string(fresh_counters_.size());
    fresh_counters_.push_back(counter);
    StmtP lowered = desugar_general_loop(v, init, cond, step, bound, body, counter);
    auto* mut = const_cast<Stmt*>(lowered.get());
    mut->loc = loc;
    return lowered;
  }

  // Expressions.
  ExprP implies_expr() {
    ExprP lhs = or_expr();
    if (is_punct("==>")) {
      SrcLoc loc = next().loc;
      return mk_bin(Op::Implies, lhs, implies_expr(), loc);
    }
    return lhs;
  }
  ExprP or_expr() {
    ExprP lhs = and_expr();
    while (is_punct("||")) {
      SrcLoc loc = next().loc;
      lhs = mk_bin(Op::Or, lhs, and_expr(), loc);
    }
    return lhs;
  }
  ExprP and_expr() {
    ExprP lhs = not_expr();
    while (is_punct("&&")) {
      SrcLoc loc = next().loc;
      lhs = mk_bin(Op::And, lhs, not_expr(), loc);
    }
    return lhs;
  }
  ExprP not_expr() {
    if (is_punct("!")) {
      SrcLoc loc = next().loc;
      return mk_un(Op::Not, not_expr(), loc);
    }
    return rel_expr();
  }
  ExprP rel_expr() {
    ExprP lhs = expr();
    static const std::pair<const char*, Op> kRel[] = {{"<", Op::Lt},  {"<=", Op::Le},
                                                      {"==", Op::Eq}, {"!=", Op::Ne},
                                                      {">=", Op::Ge}, {">", Op::Gt}};
    for (const auto& [s, op] : kRel) {
      if (is_punct(s)) {
        SrcLoc loc = next().loc;
        ExprP rhs = expr();
        return mk_bin(op, lhs, rhs, loc);
      }
    }
    return lhs;
  }
  ExprP expr() {
    ExprP lhs = term();
    while (is_punct("+") || is_punct("-")) {
      const Token& t = next();
      lhs = mk_bin(t.text == "+" ? Op::Add : Op::Sub, lhs, term(), t.loc);
    }
    return lhs;
  }
  ExprP term() {
    ExprP lhs = unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      const Token& t = next();
      Op op = t.text == "*" ? Op::Mul : t.text == "/" ? Op::Div : Op::Mod;
      lhs = mk_bin(op, lhs, unary(), t.loc);
    }
    return lhs;
  }
  ExprP unary() {
    if (is_punct("-")) {
      SrcLoc loc = next().loc;
      if (peek().kind == Tok::Number) {
        const Token& t = next();
        return mk_int(-t.value, loc);
      }
      return mk_un(Op::Neg, unary(), loc);
    }
    return primary();
  }
  ExprP primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return mk_int(t.value, t.loc);
    }
    if (accept("(")) {
      ExprP e = implies_expr();
      expect(")");
      return e;
    }
    if (is_kw("true") || is_kw("false")) {
      next();
      return mk_bool(t.text == "true", t.loc);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      if (accept("[")) {
        ExprP idx = expr();
        expect("]");
        return mk_read(t.text, idx, t.loc);
      }
      return mk_var(t.text, t.loc);
    }
    fail(t.loc, t.kind == Tok::End ? "unexpected end of input"
                                   : "unexpected '" + t.text + "' in expression");
  }
};

}  // namespace

Program parse_unchecked(const std::string& source) {
  Parser ps(lex(source));
  return ps.program();
}

Program parse(const std::string& source) {
  Program p = parse_unchecked(source);
  auto diags = validate(p);
  if (has_errors(diags)) throw FrontendError(diags);
  return p;
}

Program parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FrontendError({Diagnostic{{0, 0}, "cannot open " + path, false}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ExprP parse_expr(const std::string& text) {
  Parser ps(lex(text));
  return ps.expr_only();
}

QuantAssertion parse_assertion(const std::string& text) {
  Parser ps(lex(text));
  return ps.assertion_only();
}

}  // namespace tileproof::frontend
