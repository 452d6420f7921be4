#ifndef PHIFST_TRANSDUCER_HPP
#define PHIFST_TRANSDUCER_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "phifst/error.hpp"
#include "phifst/symbol_table.hpp"
#include "phifst/types.hpp"

namespace phifst {

template <class M>
struct Arc {
  Symbol sym;
  StateId dst;
  M out;
};

// Deterministic sequential transducer. States are dense ints. Per-state arcs
// are kept sorted by symbol; at most one arc per (state, symbol). Every final
// state carries a final output, non-final states carry none.
template <class M>
struct Transducer {
  SymbolTable isyms;
  SymbolTable osyms;  // used by pair-output machines only
  StateId initial = kNoState;
  M initial_output = one<M>();
  std::vector<std::vector<Arc<M>>> arcs;
  std::vector<std::optional<M>> final_output;

  StateId num_states() const { return static_cast<StateId>(arcs.size()); }

  bool valid_state(StateId q) const { return q >= 0 && q < num_states(); }

  StateId add_state() {
    arcs.emplace_back();
    final_output.emplace_back();
    return num_states() - 1;
  }

  bool is_final(StateId q) const {
    check_state(q);
    return final_output[q].has_value();
  }

  void set_final(StateId q, M out) {
    check_state(q);
    final_output[q] = std::move(out);
  }

  void add_arc(StateId src, Symbol sym, StateId dst, M out) {
    check_state(src);
    check_state(dst);
    auto& row = arcs[src];
    auto it = std::lower_bound(
        row.begin(), row.end(), sym,
        [](const Arc<M>& a, Symbol s) { return a.sym < s; });
    if (it != row.end() && it->sym == sym)
      throw Error("invariant-violation", "duplicate arc on state " +
                                             std::to_string(src) + " symbol " +
                                             std::to_string(sym));
    row.insert(it, Arc<M>{sym, dst, std::move(out)});
  }

  const Arc<M>* find_arc(StateId src, Symbol sym) const {
    check_state(src);
    const auto& row = arcs[src];
    auto it = std::lower_bound(
        row.begin(), row.end(), sym,
        [](const Arc<M>& a, Symbol s) { return a.sym < s; });
    if (it == row.end() || it->sym != sym) return nullptr;
    return &*it;
  }

  void check_state(StateId q) const {
    if (!valid_state(q))
      throw Error("invariant-violation",
                  "state " + std::to_string(q) + " out of range");
  }

  void check_input_symbol(Symbol a) const {
    if (!isyms.declared(a))
      throw Error("usage", "symbol " + std::to_string(a) +
                               " not in the input alphabet");
  }
};

// Extended transition/output: walk word from q along explicit arcs.
// Returns the reached state and accumulated output, nullopt when some step
// is undefined.
template <class M>
std::optional<std::pair<StateId, M>> run(const Transducer<M>& t, StateId q,
                                         const Word& word) {
  t.check_state(q);
  M acc = one<M>();
  for (Symbol a : word) {
    t.check_input_symbol(a);
    const Arc<M>* arc = t.find_arc(q, a);
    if (!arc) return std::nullopt;
    acc = times(acc, arc->out);
    q = arc->dst;
  }
  return std::make_pair(q, std::move(acc));
}

// O(word) = initial_output * lambda*(initial, word) * rho(end), defined only
// when the path exists and ends in a final state.
template <class M>
std::optional<M> output_of(const Transducer<M>& t, const Word& word) {
  auto r = run(t, t.initial, word);
  if (!r || !t.is_final(r->first)) return std::nullopt;
  return times(times(t.initial_output, r->second), *t.final_output[r->first]);
}

// Accepted inputs up to max_len in lexicographic order by symbol id
// (a prefix sorts before its extensions). `entries` hold full outputs.
// `open` holds the non-accumulated frontier: paths of length exactly max_len
// whose end state still has outgoing arcs, with the value accumulated so far
// (no final output applied); empty `open` means the table is exhaustive.
template <class M>
struct Enumeration {
  std::vector<std::pair<Word, M>> entries;
  std::vector<std::pair<Word, M>> open;
};

namespace detail {
template <class M>
void enumerate_rec(const Transducer<M>& t, StateId q, const M& acc, Word& word,
                   int max_len, Enumeration<M>& out) {
  if (t.final_output[q])
    out.entries.emplace_back(word, times(acc, *t.final_output[q]));
  if (static_cast<int>(word.size()) == max_len) {
    if (!t.arcs[q].empty()) out.open.emplace_back(word, acc);
    return;
  }
  for (const Arc<M>& arc : t.arcs[q]) {
    word.push_back(arc.sym);
    enumerate_rec(t, arc.dst, times(acc, arc.out), word, max_len, out);
    word.pop_back();
  }
}
}  // namespace detail

// Enumerates O^q (no initial output applied).
template <class M>
Enumeration<M> enumerate_from(const Transducer<M>& t, StateId q, int max_len) {
  t.check_state(q);
  Enumeration<M> out;
  Word word;
  detail::enumerate_rec(t, q, one<M>(), word, max_len, out);
  return out;
}

// Enumerates O (initial output applied).
template <class M>
Enumeration<M> enumerate(const Transducer<M>& t, int max_len) {
  t.check_state(t.initial);
  Enumeration<M> out;
  Word word;
  detail::enumerate_rec(t, t.initial, t.initial_output, word, max_len, out);
  return out;
}

template <class M>
std::vector<bool> accessible_states(const Transducer<M>& t) {
  std::vector<bool> seen(t.num_states(), false);
  if (!t.valid_state(t.initial)) return seen;
  std::vector<StateId> stack{t.initial};
  seen[t.initial] = true;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const Arc<M>& arc : t.arcs[q])
      if (!seen[arc.dst]) {
        seen[arc.dst] = true;
        stack.push_back(arc.dst);
      }
  }
  return seen;
}

template <class M>
std::vector<bool> coaccessible_states(const Transducer<M>& t) {
  std::vector<std::vector<StateId>> rev(t.num_states());
  std::vector<bool> seen(t.num_states(), false);
  std::vector<StateId> stack;
  for (StateId q = 0; q < t.num_states(); ++q) {
    for (const Arc<M>& arc : t.arcs[q]) rev[arc.dst].push_back(q);
    if (t.final_output[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (StateId p : rev[q])
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
  }
  return seen;
}

// Restriction to accessible and co-accessible states. State order is
// preserved; O is unchanged. Throws empty-machine when the initial state
// would be removed.
template <class M>
Transducer<M> trim(const Transducer<M>& t) {
  std::vector<bool> acc = accessible_states(t);
  std::vector<bool> coacc = coaccessible_states(t);
  std::vector<StateId> remap(t.num_states(), kNoState);
  Transducer<M> out;
  out.isyms = t.isyms;
  out.osyms = t.osyms;
  for (StateId q = 0; q < t.num_states(); ++q)
    if (acc[q] && coacc[q]) remap[q] = out.add_state();
  if (!t.valid_state(t.initial) || remap[t.initial] == kNoState)
    throw Error("empty-machine", "no accepted input remains after trimming");
  out.initial = remap[t.initial];
  out.initial_output = t.initial_output;
  for (StateId q = 0; q < t.num_states(); ++q) {
    if (remap[q] == kNoState) continue;
    if (t.final_output[q]) out.set_final(remap[q], *t.final_output[q]);
    for (const Arc<M>& arc : t.arcs[q])
      if (remap[arc.dst] != kNoState)
        out.add_arc(remap[q], arc.sym, remap[arc.dst], arc.out);
  }
  return out;
}

// True when the explicit transition graph has no cycle.
template <class M>
bool is_acyclic(const Transducer<M>& t) {
  enum { kWhite, kGrey, kBlack };
  std::vector<int> color(t.num_states(), kWhite);
  // iterative DFS with an explicit stack of (state, next arc index)
  for (StateId root = 0; root < t.num_states(); ++root) {
    if (color[root] != kWhite) continue;
    std::vector<std::pair<StateId, size_t>> stack{{root, 0}};
    color[root] = kGrey;
    while (!stack.empty()) {
      auto& [q, i] = stack.back();
      if (i == t.arcs[q].size()) {
        color[q] = kBlack;
        stack.pop_back();
        continue;
      }
      StateId dst = t.arcs[q][i++].dst;
      if (color[dst] == kGrey) return false;
      if (color[dst] == kWhite) {
        color[dst] = kGrey;
        stack.emplace_back(dst, 0);
      }
    }
  }
  return true;
}

}  // namespace phifst

#endif  // PHIFST_TRANSDUCER_HPP
