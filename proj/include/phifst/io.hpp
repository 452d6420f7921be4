#ifndef PHIFST_IO_HPP
#define PHIFST_IO_HPP

#include <string>
#include <vector>

#include "phifst/failure.hpp"
#include "phifst/transducer.hpp"

namespace phifst {

// Line-oriented text format, one record per line, '#' starts a comment:
//   T <weight-only|pair>
//   A <input symbols...>
//   O <output symbols...>            (pair machines)
//   I <state> [<word>] <weight>
//   E <state> [<word>] <weight>
//   arc <src> <sym> <dst> [<word>] <weight>
//   fail <src> <dst> <weight>        (weight-only machines)
//   B <states...>                    (factor boundary, optional)
// Words are comma-joined output labels, '-' is the empty word. Printing is
// canonical: states and symbols ascending, weights with 17 significant
// digits, so print -> parse -> print is byte-stable.
struct ParsedMachine {
  bool is_pair = false;
  Transducer<PairOutput> pair;
  FailureTransducer<double> failure;
  std::vector<bool> boundary;

  bool has_failure_arcs() const {
    for (StateId f : failure.fail_to)
      if (f != kNoState) return true;
    return false;
  }

  bool has_boundary() const {
    for (bool b : boundary)
      if (b) return true;
    return false;
  }
};

ParsedMachine parse_text(const std::string& text);

std::string print_text(const Transducer<PairOutput>& t);
std::string print_text(const FailureTransducer<double>& ft,
                       const std::vector<bool>* boundary = nullptr);
std::string print_text(const ParsedMachine& m);

std::string format_weight(double w);
std::string format_word(const SymbolTable& syms, const Word& word);

// Splits on whitespace; a token that is not a known label is split into
// single-character labels. A symbol outside the alphabet makes the input
// undefined (undefined-path), not malformed.
Word tokenize_input(const SymbolTable& syms, const std::string& text);

}  // namespace phifst

#endif  // PHIFST_IO_HPP
