#include "phifst/symbol_table.hpp"

#include "phifst/error.hpp"

namespace phifst {

SymbolTable::SymbolTable() {
  labels_.push_back("$");
  declared_.push_back(false);
  ids_["$"] = kDollar;
}

Symbol SymbolTable::declare(const std::string& label) {
  if (label.empty() || label == "-" || label.find(',') != std::string::npos ||
      label.find_first_of(" \t\r\n#") != std::string::npos) {
    throw Error("syntax-error", "bad symbol label '" + label + "'");
  }
  auto it = ids_.find(label);
  if (it != ids_.end()) {
    declared_[it->second] = true;
    return it->second;
  }
  Symbol id = size();
  labels_.push_back(label);
  declared_.push_back(true);
  ids_[label] = id;
  return id;
}

Symbol SymbolTable::find(const std::string& label) const {
  auto it = ids_.find(label);
  return it == ids_.end() ? kNoSymbol : it->second;
}

const std::string& SymbolTable::label(Symbol s) const {
  if (!contains(s)) throw Error("invariant-violation", "symbol id out of range");
  return labels_[s];
}

bool SymbolTable::declared(Symbol s) const {
  return contains(s) && declared_[s];
}

std::vector<Symbol> SymbolTable::alphabet() const {
  std::vector<Symbol> out;
  for (Symbol s = 0; s < size(); ++s)
    if (declared_[s]) out.push_back(s);
  return out;
}

}  // namespace phifst
