#include "tileproof/smt/sexpr.hpp"

#include <cctype>

namespace tileproof::smt {

std::string SExpr::str() const {
  if (atom) return text;
  std::string out = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].str();
  }
  return out + ")";
}

namespace {

struct Reader {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s[i] == ';') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (i >= s.size()) throw SExprError("unexpected end of input");
    if (s[i] == '(') {
      ++i;
      SExpr e;
      e.atom = false;
      for (;;) {
        skip();
        if (i >= s.size()) throw SExprError("unbalanced parenthesis");
        if (s[i] == ')') {
          ++i;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (s[i] == ')') throw SExprError("unexpected ')'");
    SExpr e;
    if (s[i] == '"') {
      size_t j = i + 1;
      while (j < s.size()) {
        if (s[j] == '"') {
          if (j + 1 < s.size() && s[j + 1] == '"') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      if (j >= s.size()) throw SExprError("unterminated string");
      e.text = s.substr(i, j + 1 - i);
      i = j + 1;
      return e;
    }
    if (s[i] == '|') {
      size_t j = s.find('|', i + 1);
      if (j == std::string::npos) throw SExprError("unterminated quoted symbol");
      e.text = s.substr(i, j + 1 - i);
      i = j + 1;
      return e;
    }
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
           s[j] != ')')
      ++j;
    e.text = s.substr(i, j - i);
    i = j;
    return e;
  }
};

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

TermP bin_chain(Kind k, const std::vector<TermP>& xs) {
  TermP acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) {
    switch (k) {
      case Kind::Add: acc = add(acc, xs[i]); break;
      case Kind::Sub: acc = sub(acc, xs[i]); break;
      case Kind::Mul: acc = mul(acc, xs[i]); break;
      default: break;
    }
  }
  return acc;
}

}  // namespace

std::vector<SExpr> parse_sexprs(const std::string& text) {
  Reader r{text};
  std::vector<SExpr> out;
  for (;;) {
    r.skip();
    if (r.i >= text.size()) break;
    out.push_back(r.read());
  }
  return out;
}

TermP to_term(const SExpr& s, const std::map<std::string, Sort>& env) {
  if (s.atom) {
    if (is_number(s.text)) return int_lit(std::stoll(s.text));
    if (s.text == "true") return tru();
    if (s.text == "false") return fls();
    auto it = env.find(s.text);
    return var(s.text, it == env.end() ? Sort::Int : it->second);
  }
  if (s.items.empty() || !s.items[0].atom) throw SExprError("unsupported term: " + s.str());
  const std::string& head = s.items[0].text;
  if (head == "forall" || head == "exists") {
    if (s.items.size() != 3) throw SExprError("malformed binder: " + s.str());
    std::vector<Binder> bs;
    std::map<std::string, Sort> inner = env;
    for (const auto& b : s.items[1].items) {
      Sort so = Sort::Int;
      if (b.items.size() == 2 && b.items[1].atom && b.items[1].text == "Bool") so = Sort::Bool;
      if (b.items.size() == 2 && !b.items[1].atom) so = Sort::IntArray;
      bs.emplace_back(b.items[0].text, so);
      inner[b.items[0].text] = so;
    }
    TermP body = to_term(s.items[2], inner);
    return head == "forall" ? forall(bs, body) : exists(bs, body);
  }
  std::vector<TermP> xs;
  for (size_t i = 1; i < s.items.size(); ++i) xs.push_back(to_term(s.items[i], env));
  auto need = [&](size_t n) {
    if (xs.size() != n) throw SExprError("arity mismatch: " + s.str());
  };
  if (head == "+") return bin_chain(Kind::Add, xs);
  if (head == "*") return bin_chain(Kind::Mul, xs);
  if (head == "-") return xs.size() == 1 ? neg(xs[0]) : bin_chain(Kind::Sub, xs);
  if (head == "div") return need(2), div(xs[0], xs[1]);
  if (head == "mod") return need(2), mod(xs[0], xs[1]);
  if (head == "<") return need(2), lt(xs[0], xs[1]);
  if (head == "<=") return need(2), le(xs[0], xs[1]);
  if (head == "=") return need(2), eq(xs[0], xs[1]);
  if (head == ">=") return need(2), ge(xs[0], xs[1]);
  if (head == ">") return need(2), gt(xs[0], xs[1]);
  if (head == "and") return and_(xs);
  if (head == "or") return or_(xs);
  if (head == "not") return need(1), not_(xs[0]);
  if (head == "=>") return need(2), implies(xs[0], xs[1]);
  if (head == "ite") return need(3), ite(xs[0], xs[1], xs[2]);
  if (head == "select") return need(2), select(xs[0], xs[1]);
  if (head == "store") return need(3), store(xs[0], xs[1], xs[2]);
  throw SExprError("unsupported operator '" + head + "'");
}

}  // namespace tileproof::smt
