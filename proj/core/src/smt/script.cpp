#include "tileproof/smt/script.hpp"

#include <map>
#include <sstream>

namespace tileproof::smt {

std::string Script::logic() const {
  bool quant = false, nonlin = false;
  for (const auto& a : assertions) {
    quant = quant || has_quantifier(a);
    nonlin = nonlin || is_nonlinear(a);
  }
  std::string l = nonlin ? "AUFNIA" : "AUFLIA";
  return quant ? l : "QF_" + l;
}

std::string Script::emit() const {
  std::ostringstream os;
  for (const auto& c : comments) os << "; " << c << '\n';
  os << "(set-logic " << logic() << ")\n";
  std::map<std::string, Sort> decls;
  for (const auto& a : assertions) free_vars(a, decls);
  for (const auto& v : get_values) free_vars(v, decls);
  for (const auto& [name, sort] : decls)
    os << "(declare-fun " << name << " () " << sort_name(sort) << ")\n";
  for (const auto& a : assertions) os << "(assert " << smt::emit(a) << ")\n";
  os << "(check-sat)\n";
  if (want_model) {
    os << "(get-model)\n";
    if (!get_values.empty()) {
      os << "(get-value (";
      for (size_t i = 0; i < get_values.size(); ++i) {
        if (i) os << ' ';
        os << smt::emit(get_values[i]);
      }
      os << "))\n";
    }
  }
  os << "(exit)\n";
  return os.str();
}

}  // namespace tileproof::smt
