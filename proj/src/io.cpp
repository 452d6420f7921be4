#include "phifst/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "phifst/error.hpp"

namespace phifst {

namespace {

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw Error("syntax-error", "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

StateId parse_state(const std::string& tok, int line) {
  if (tok.empty()) fail_at(line, "empty state id");
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (*end != '\0' || v < 0 || v > INT32_MAX)
    fail_at(line, "bad state id '" + tok + "'");
  return static_cast<StateId>(v);
}

double parse_weight(const std::string& tok, int line) {
  char* end = nullptr;
  double w = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    fail_at(line, "bad weight '" + tok + "'");
  if (!std::isfinite(w) || w < 0.0)
    throw Error("invariant-violation", "line " + std::to_string(line) +
                                           ": weight must be finite and "
                                           "non-negative, got '" +
                                           tok + "'");
  return w;
}

Word parse_word(const SymbolTable& syms, const std::string& tok, int line) {
  Word word;
  if (tok == "-") return word;
  size_t pos = 0;
  while (pos <= tok.size()) {
    size_t comma = tok.find(',', pos);
    if (comma == std::string::npos) comma = tok.size();
    std::string label = tok.substr(pos, comma - pos);
    Symbol s = syms.find(label);
    if (s == kNoSymbol || !syms.declared(s))
      fail_at(line, "unknown output symbol '" + label + "'");
    word.push_back(s);
    pos = comma + 1;
  }
  return word;
}

Symbol parse_input_symbol(const SymbolTable& syms, const std::string& tok,
                          int line) {
  Symbol s = syms.find(tok);
  if (s == kNoSymbol || !syms.declared(s))
    fail_at(line, "unknown input symbol '" + tok + "'");
  return s;
}

void declare_all(SymbolTable& syms, const std::vector<std::string>& toks,
                 int line) {
  for (size_t i = 1; i < toks.size(); ++i) {
    try {
      syms.declare(toks[i]);
    } catch (const Error& e) {
      fail_at(line, e.what());
    }
  }
}

template <class M>
void ensure_state(Transducer<M>& t, StateId q) {
  while (t.num_states() <= q) t.add_state();
}

void ensure_state(FailureTransducer<double>& ft, StateId q) {
  while (ft.base.num_states() <= q) ft.add_state();
}

void append_record(std::string& out, const std::string& rec) {
  out += rec;
  out += '\n';
}

std::string symbols_record(const char* tag, const SymbolTable& syms) {
  std::string rec = tag;
  for (Symbol s : syms.alphabet()) {
    rec += ' ';
    rec += syms.label(s);
  }
  return rec;
}

}  // namespace

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

std::string format_word(const SymbolTable& syms, const Word& word) {
  if (word.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) out += ',';
    out += syms.label(word[i]);
  }
  return out;
}

Word tokenize_input(const SymbolTable& syms, const std::string& text) {
  Word word;
  for (const std::string& tok : split_ws(text)) {
    Symbol s = syms.find(tok);
    if (s != kNoSymbol && syms.declared(s)) {
      word.push_back(s);
      continue;
    }
    for (char c : tok) {
      Symbol cs = syms.find(std::string(1, c));
      // A symbol outside the alphabet puts the input outside Dom(O).
      if (cs == kNoSymbol || !syms.declared(cs))
        throw Error("undefined-path", "input symbol '" + std::string(1, c) +
                                          "' not in the alphabet");
      word.push_back(cs);
    }
  }
  return word;
}

ParsedMachine parse_text(const std::string& text) {
  ParsedMachine m;
  bool saw_type = false;
  bool saw_initial = false;
  std::vector<StateId> boundary_states;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::vector<std::string> toks = split_ws(raw);
    if (toks.empty()) continue;
    const std::string& rec = toks[0];

    if (rec == "T") {
      if (saw_type) fail_at(lineno, "duplicate T record");
      if (toks.size() != 2 ||
          (toks[1] != "weight-only" && toks[1] != "pair"))
        fail_at(lineno, "expected 'T weight-only' or 'T pair'");
      m.is_pair = (toks[1] == "pair");
      saw_type = true;
      continue;
    }
    if (!saw_type) fail_at(lineno, "first record must be T");

    SymbolTable& isyms = m.is_pair ? m.pair.isyms : m.failure.base.isyms;
    SymbolTable& osyms = m.is_pair ? m.pair.osyms : m.failure.base.isyms;

    if (rec == "A") {
      declare_all(isyms, toks, lineno);
    } else if (rec == "O") {
      if (!m.is_pair) fail_at(lineno, "O record in a weight-only machine");
      declare_all(osyms, toks, lineno);
    } else if (rec == "I") {
      if (saw_initial) fail_at(lineno, "duplicate I record");
      size_t want = m.is_pair ? 4u : 3u;
      if (toks.size() != want) fail_at(lineno, "bad I record");
      StateId q = parse_state(toks[1], lineno);
      if (m.is_pair) {
        ensure_state(m.pair, q);
        m.pair.initial = q;
        m.pair.initial_output = {parse_word(osyms, toks[2], lineno),
                                 parse_weight(toks[3], lineno)};
      } else {
        ensure_state(m.failure, q);
        m.failure.base.initial = q;
        m.failure.base.initial_output = parse_weight(toks[2], lineno);
      }
      saw_initial = true;
    } else if (rec == "E") {
      size_t want = m.is_pair ? 4u : 3u;
      if (toks.size() != want) fail_at(lineno, "bad E record");
      StateId q = parse_state(toks[1], lineno);
      if (m.is_pair) {
        ensure_state(m.pair, q);
        if (m.pair.final_output[q])
          fail_at(lineno, "duplicate E record for state " + toks[1]);
        m.pair.set_final(q, {parse_word(osyms, toks[2], lineno),
                             parse_weight(toks[3], lineno)});
      } else {
        ensure_state(m.failure, q);
        if (m.failure.base.final_output[q])
          fail_at(lineno, "duplicate E record for state " + toks[1]);
        m.failure.base.set_final(q, parse_weight(toks[2], lineno));
      }
    } else if (rec == "arc") {
      size_t want = m.is_pair ? 6u : 5u;
      if (toks.size() != want) fail_at(lineno, "bad arc record");
      StateId src = parse_state(toks[1], lineno);
      StateId dst = parse_state(toks[3], lineno);
      try {
        if (m.is_pair) {
          ensure_state(m.pair, std::max(src, dst));
          Symbol sym = parse_input_symbol(isyms, toks[2], lineno);
          m.pair.add_arc(src, sym, dst,
                         {parse_word(osyms, toks[4], lineno),
                          parse_weight(toks[5], lineno)});
        } else {
          ensure_state(m.failure, std::max(src, dst));
          Symbol sym = parse_input_symbol(isyms, toks[2], lineno);
          m.failure.base.add_arc(src, sym, dst,
                                 parse_weight(toks[4], lineno));
        }
      } catch (const Error& e) {
        if (std::string(e.code()) == "invariant-violation")
          fail_at(lineno, e.what());
        throw;
      }
    } else if (rec == "fail") {
      if (m.is_pair) fail_at(lineno, "fail record in a pair machine");
      if (toks.size() != 4) fail_at(lineno, "bad fail record");
      StateId src = parse_state(toks[1], lineno);
      StateId dst = parse_state(toks[2], lineno);
      ensure_state(m.failure, std::max(src, dst));
      if (m.failure.has_failure(src))
        fail_at(lineno, "duplicate fail record for state " + toks[1]);
      m.failure.set_failure(src, dst, parse_weight(toks[3], lineno));
    } else if (rec == "B") {
      for (size_t i = 1; i < toks.size(); ++i)
        boundary_states.push_back(parse_state(toks[i], lineno));
    } else {
      fail_at(lineno, "unknown record '" + rec + "'");
    }
  }

  if (!saw_type) fail_at(lineno, "empty input, expected a T record");
  if (!saw_initial) fail_at(lineno, "missing I record");

  StateId n =
      m.is_pair ? m.pair.num_states() : m.failure.base.num_states();
  m.boundary.assign(n, false);
  for (StateId q : boundary_states) {
    if (q >= n) fail_at(lineno, "B record names unknown state");
    m.boundary[q] = true;
  }
  return m;
}

std::string print_text(const Transducer<PairOutput>& t) {
  std::string out;
  append_record(out, "T pair");
  if (!t.isyms.alphabet().empty())
    append_record(out, symbols_record("A", t.isyms));
  if (!t.osyms.alphabet().empty())
    append_record(out, symbols_record("O", t.osyms));
  if (t.initial == kNoState)
    throw Error("invariant-violation", "cannot print a machine without an "
                                       "initial state");
  append_record(out, "I " + std::to_string(t.initial) + ' ' +
                         format_word(t.osyms, t.initial_output.word) + ' ' +
                         format_weight(t.initial_output.weight));
  for (StateId q = 0; q < t.num_states(); ++q)
    if (t.final_output[q])
      append_record(out, "E " + std::to_string(q) + ' ' +
                             format_word(t.osyms, t.final_output[q]->word) +
                             ' ' +
                             format_weight(t.final_output[q]->weight));
  for (StateId q = 0; q < t.num_states(); ++q)
    for (const Arc<PairOutput>& a : t.arcs[q])
      append_record(out, "arc " + std::to_string(q) + ' ' +
                             t.isyms.label(a.sym) + ' ' +
                             std::to_string(a.dst) + ' ' +
                             format_word(t.osyms, a.out.word) + ' ' +
                             format_weight(a.out.weight));
  return out;
}

std::string print_text(const FailureTransducer<double>& ft,
                       const std::vector<bool>* boundary) {
  const Transducer<double>& t = ft.base;
  std::string out;
  append_record(out, "T weight-only");
  if (!t.isyms.alphabet().empty())
    append_record(out, symbols_record("A", t.isyms));
  if (t.initial == kNoState)
    throw Error("invariant-violation", "cannot print a machine without an "
                                       "initial state");
  append_record(out, "I " + std::to_string(t.initial) + ' ' +
                         format_weight(t.initial_output));
  for (StateId q = 0; q < t.num_states(); ++q)
    if (t.final_output[q])
      append_record(out, "E " + std::to_string(q) + ' ' +
                             format_weight(*t.final_output[q]));
  for (StateId q = 0; q < t.num_states(); ++q)
    for (const Arc<double>& a : t.arcs[q])
      append_record(out, "arc " + std::to_string(q) + ' ' +
                             t.isyms.label(a.sym) + ' ' +
                             std::to_string(a.dst) + ' ' +
                             format_weight(a.out));
  for (StateId q = 0; q < t.num_states(); ++q)
    if (ft.fail_to[q] != kNoState)
      append_record(out, "fail " + std::to_string(q) + ' ' +
                             std::to_string(ft.fail_to[q]) + ' ' +
                             format_weight(ft.fail_out[q]));
  if (boundary) {
    std::string rec = "B";
    bool any = false;
    for (StateId q = 0; q < t.num_states(); ++q)
      if (q < static_cast<StateId>(boundary->size()) && (*boundary)[q]) {
        rec += ' ';
        rec += std::to_string(q);
        any = true;
      }
    if (any) append_record(out, rec);
  }
  return out;
}

std::string print_text(const ParsedMachine& m) {
  if (m.is_pair) return print_text(m.pair);
  return print_text(m.failure, m.boundary.empty() ? nullptr : &m.boundary);
}

}  // namespace phifst
