#ifndef PHIFST_SYMBOL_TABLE_HPP
#define PHIFST_SYMBOL_TABLE_HPP

#include <map>
#include <string>
#include <vector>

#include "phifst/types.hpp"

namespace phifst {

// Maps symbol ids to printable labels. Id 0 is reserved for the terminator
// label "$" in every table; it belongs to the alphabet only if declared.
// Ids are dense: 0..size()-1.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the id of label, inserting it if absent. Declaring makes the
  // symbol a member of the alphabet.
  Symbol declare(const std::string& label);

  // Id of an existing label, kNoSymbol if unknown.
  Symbol find(const std::string& label) const;

  const std::string& label(Symbol s) const;
  bool declared(Symbol s) const;
  bool contains(Symbol s) const { return s >= 0 && s < size(); }
  Symbol size() const { return static_cast<Symbol>(labels_.size()); }

  // Declared symbols in id order (the alphabet).
  std::vector<Symbol> alphabet() const;

  static constexpr Symbol kDollar = 0;

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.labels_ == b.labels_ && a.declared_ == b.declared_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<bool> declared_;
  std::map<std::string, Symbol> ids_;
};

}  // namespace phifst

#endif  // PHIFST_SYMBOL_TABLE_HPP
