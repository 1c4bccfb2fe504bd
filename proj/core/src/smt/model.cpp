#include "tileproof/smt/model.hpp"

namespace tileproof::smt {

int64_t Model::int_value(const std::string& n, int64_t dflt) const {
  auto it = values.find(n);
  return it == values.end() ? dflt : it->second.scalar;
}

ArrayValue Model::array_value(const std::string& n) const {
  auto it = values.find(n);
  return it == values.end() ? ArrayValue{} : it->second.array;
}

namespace {

int64_t ediv(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  if (r < 0) q += b > 0 ? -1 : 1;
  return q;
}

std::optional<int64_t> int_atom(const SExpr& s) {
  if (s.atom) {
    if (s.text.empty()) return std::nullopt;
    for (char c : s.text)
      if (c < '0' || c > '9') return std::nullopt;
    return std::stoll(s.text);
  }
  if (s.items.size() == 2 && s.items[0].is("-")) {
    auto v = int_atom(s.items[1]);
    if (v) return -*v;
  }
  return std::nullopt;
}

struct FunDef {
  std::vector<std::string> params;
  SExpr body;
};

// Array literal: const / store chains, or as-array over a unary function
// whose body is an ite chain keyed on its parameter.
std::optional<ArrayValue> array_literal(const SExpr& s,
                                        const std::map<std::string, FunDef>& funs) {
  if (s.atom) return std::nullopt;
  if (s.items.size() == 2 && !s.items[0].atom && s.items[0].items.size() == 3 &&
      s.items[0].items[0].is("as") && s.items[0].items[1].is("const")) {
    auto v = int_atom(s.items[1]);
    if (!v) return std::nullopt;
    ArrayValue a;
    a.fallback = *v;
    return a;
  }
  if (s.items.size() == 4 && s.items[0].is("store")) {
    auto base = array_literal(s.items[1], funs);
    auto i = int_atom(s.items[2]);
    auto v = int_atom(s.items[3]);
    if (!base || !i || !v) return std::nullopt;
    base->entries[*i] = *v;
    return base;
  }
  if (s.items.size() == 3 && s.items[0].is("_") && s.items[1].is("as-array")) {
    auto it = funs.find(s.items[2].text);
    if (it == funs.end() || it->second.params.size() != 1) return std::nullopt;
    const std::string& x = it->second.params[0];
    ArrayValue a;
    const SExpr* cur = &it->second.body;
    std::map<int64_t, int64_t> entries;
    while (!cur->atom && cur->items.size() == 4 && cur->items[0].is("ite")) {
      const SExpr& c = cur->items[1];
      if (c.atom || c.items.size() != 3 || !c.items[0].is("=")) return std::nullopt;
      std::optional<int64_t> key;
      if (c.items[1].is(x)) key = int_atom(c.items[2]);
      else if (c.items[2].is(x)) key = int_atom(c.items[1]);
      auto v = int_atom(cur->items[2]);
      if (!key || !v) return std::nullopt;
      entries.emplace(*key, *v);  // first match wins, like ite
      cur = &cur->items[3];
    }
    auto d = int_atom(*cur);
    if (!d) return std::nullopt;
    a.fallback = *d;
    a.entries = std::move(entries);
    return a;
  }
  return std::nullopt;
}

}  // namespace

Model parse_model(const SExpr& s) {
  Model m;
  if (s.atom) return m;
  size_t start = (!s.items.empty() && s.items[0].is("model")) ? 1 : 0;
  std::map<std::string, FunDef> funs;
  std::vector<std::pair<std::string, const SExpr*>> consts;
  for (size_t i = start; i < s.items.size(); ++i) {
    const SExpr& d = s.items[i];
    if (d.atom || d.items.size() != 5 || !d.items[0].is("define-fun")) continue;
    const std::string& name = d.items[1].text;
    FunDef f;
    for (const auto& p : d.items[2].items)
      if (!p.atom && !p.items.empty()) f.params.push_back(p.items[0].text);
    f.body = d.items[4];
    if (f.params.empty()) {
      Value v;
      const SExpr& sort = d.items[3];
      if (sort.is("Int")) {
        auto x = int_atom(d.items[4]);
        if (!x) continue;
        v.sort = Sort::Int;
        v.scalar = *x;
        m.values[name] = v;
      } else if (sort.is("Bool")) {
        if (!d.items[4].is("true") && !d.items[4].is("false")) continue;
        v.sort = Sort::Bool;
        v.scalar = d.items[4].is("true") ? 1 : 0;
        m.values[name] = v;
      } else {
        consts.emplace_back(name, &d.items[4]);
      }
    }
    funs[name] = std::move(f);
  }
  for (const auto& [name, body] : consts) {
    auto a = array_literal(*body, funs);
    if (!a) continue;
    Value v;
    v.sort = Sort::IntArray;
    v.array = std::move(*a);
    m.values[name] = v;
  }
  return m;
}

void parse_get_value(const SExpr& s, Model& m) {
  if (s.atom) return;
  for (const auto& pair : s.items) {
    if (pair.atom || pair.items.size() != 2) continue;
    auto v = int_atom(pair.items[1]);
    if (v) m.get_values[pair.items[0].str()] = *v;
  }
}

std::optional<Value> eval(const TermP& t, const Model& m) {
  auto ival = [](int64_t x) {
    Value v;
    v.scalar = x;
    return v;
  };
  auto bval = [](bool b) {
    Value v;
    v.sort = Sort::Bool;
    v.scalar = b ? 1 : 0;
    return v;
  };
  switch (t->kind) {
    case Kind::IntLit: return ival(t->value);
    case Kind::BoolLit: return bval(t->value != 0);
    case Kind::Var: {
      auto it = m.values.find(t->name);
      if (it != m.values.end()) return it->second;
      Value v;
      v.sort = t->sort;
      return v;
    }
    case Kind::Forall:
    case Kind::Exists: return std::nullopt;
    default: break;
  }
  std::vector<Value> xs;
  if (t->kind == Kind::Ite) {
    auto c = eval(t->args[0], m);
    if (!c) return std::nullopt;
    return eval(t->args[c->scalar ? 1 : 2], m);
  }
  for (const auto& a : t->args) {
    auto v = eval(a, m);
    if (!v) return std::nullopt;
    xs.push_back(std::move(*v));
  }
  auto i = [&](size_t k) { return xs[k].scalar; };
  switch (t->kind) {
    case Kind::Add: return ival(i(0) + i(1));
    case Kind::Sub: return ival(i(0) - i(1));
    case Kind::Mul: return ival(i(0) * i(1));
    case Kind::Neg: return ival(-i(0));
    case Kind::Div:
      if (i(1) == 0) return std::nullopt;
      return ival(ediv(i(0), i(1)));
    case Kind::Mod:
      if (i(1) == 0) return std::nullopt;
      return ival(i(0) - i(1) * ediv(i(0), i(1)));
    case Kind::Lt: return bval(i(0) < i(1));
    case Kind::Le: return bval(i(0) <= i(1));
    case Kind::Eq:
      if (xs[0].sort == Sort::IntArray) {
        const auto& a = xs[0].array;
        const auto& b = xs[1].array;
        if (a.fallback != b.fallback) return bval(false);
        for (const auto& [k, v] : a.entries)
          if (b.at(k) != v) return bval(false);
        for (const auto& [k, v] : b.entries)
          if (a.at(k) != v) return bval(false);
        return bval(true);
      }
      return bval(i(0) == i(1));
    case Kind::Ge: return bval(i(0) >= i(1));
    case Kind::Gt: return bval(i(0) > i(1));
    case Kind::And: {
      for (const auto& x : xs)
        if (!x.scalar) return bval(false);
      return bval(true);
    }
    case Kind::Or: {
      for (const auto& x : xs)
        if (x.scalar) return bval(true);
      return bval(false);
    }
    case Kind::Not: return bval(!i(0));
    case Kind::Implies: return bval(!i(0) || i(1));
    case Kind::Select: return ival(xs[0].array.at(i(1)));
    case Kind::Store: {
      Value v = xs[0];
      v.sort = Sort::IntArray;
      v.array.entries[i(1)] = i(2);
      return v;
    }
    default: return std::nullopt;
  }
}

std::optional<bool> eval_bool(const TermP& t, const Model& m) {
  auto v = eval(t, m);
  if (!v) return std::nullopt;
  return v->scalar != 0;
}

}  // namespace tileproof::smt
