#include "phifst/compose.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <optional>

#include "phifst/error.hpp"

namespace phifst {

std::vector<Symbol> output_symbol_remap(const SymbolTable& from,
                                        const SymbolTable& to) {
  std::vector<Symbol> remap(from.size(), kNoSymbol);
  for (Symbol s = 0; s < from.size(); ++s) {
    Symbol t = to.find(from.label(s));
    if (t != kNoSymbol && to.declared(t)) remap[s] = t;
  }
  return remap;
}

namespace {

// Remaps a left-machine output word into right-machine symbol ids.
// nullopt when some label is missing from the right alphabet.
std::optional<Word> remap_word(const Word& word,
                               const std::vector<Symbol>& remap) {
  Word out;
  out.reserve(word.size());
  for (Symbol s : word) {
    if (s < 0 || s >= static_cast<Symbol>(remap.size()) ||
        remap[s] == kNoSymbol)
      return std::nullopt;
    out.push_back(remap[s]);
  }
  return out;
}

}  // namespace

ComposeResult compose(const Transducer<PairOutput>& t,
                      const FailureTransducer<double>& ft,
                      bool accessible_only) {
  t.check_state(t.initial);
  ft.base.check_state(ft.base.initial);
  for (StateId q = 0; q < ft.num_states(); ++q) level(ft, q);  // f acyclic
  std::vector<Symbol> remap = output_symbol_remap(t.osyms, ft.base.isyms);

  ComposeResult result;
  FailureTransducer<double>& out = result.machine;
  out.base.isyms = t.isyms;

  std::map<std::pair<StateId, StateId>, StateId> index;
  auto intern = [&](StateId p1, StateId p2) {
    auto [it, inserted] = index.try_emplace({p1, p2}, out.num_states());
    if (inserted) {
      out.add_state();
      result.state_pairs.emplace_back(p1, p2);
    }
    return it->second;
  };

  // initial state: walk the right machine over the initial output word
  std::optional<Word> init_word =
      remap_word(t.initial_output.word, remap);
  std::optional<std::pair<StateId, double>> init_walk;
  if (init_word) init_walk = completed_run(ft, ft.base.initial, *init_word);
  if (!init_walk)
    throw Error("initial-undefined",
                "right machine rejects the left initial output word");
  std::deque<StateId> queue;
  if (accessible_only) {
    queue.push_back(intern(t.initial, init_walk->first));
  } else {
    for (StateId p1 = 0; p1 < t.num_states(); ++p1)
      for (StateId p2 = 0; p2 < ft.num_states(); ++p2) intern(p1, p2);
    for (StateId q = 0; q < out.num_states(); ++q) queue.push_back(q);
  }
  out.base.initial = index.at({t.initial, init_walk->first});
  out.base.initial_output = t.initial_output.weight *
                            ft.base.initial_output * init_walk->second;

  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    auto [p1, p2] = result.state_pairs[q];
    size_t before = result.state_pairs.size();
    for (const Arc<PairOutput>& arc : t.arcs[p1]) {
      if (arc.out.word.empty()) {
        out.base.add_arc(q, arc.sym, intern(arc.dst, p2), arc.out.weight);
        continue;
      }
      std::optional<Word> word = remap_word(arc.out.word, remap);
      if (!word) continue;
      // first output symbol must have an explicit arc, not a failure walk
      if (!ft.base.find_arc(p2, word->front())) continue;
      auto walk = completed_run(ft, p2, *word);
      if (!walk) continue;
      out.base.add_arc(q, arc.sym, intern(arc.dst, walk->first),
                       arc.out.weight * walk->second);
    }
    if (ft.fail_to[p2] != kNoState)
      out.set_failure(q, intern(p1, ft.fail_to[p2]), ft.fail_out[p2]);
    if (t.final_output[p1]) {
      const PairOutput& rho1 = *t.final_output[p1];
      std::optional<Word> word = remap_word(rho1.word, remap);
      if (word) {
        auto walk = completed_run(ft, p2, *word);
        if (walk && ft.base.final_output[walk->first])
          out.base.set_final(q, rho1.weight * walk->second *
                                    *ft.base.final_output[walk->first]);
      }
    }
    if (accessible_only)
      for (size_t i = before; i < result.state_pairs.size(); ++i)
        queue.push_back(static_cast<StateId>(i));
  }
  return result;
}

CompositionCheck verify_composition(const Transducer<PairOutput>& t,
                                    const FailureTransducer<double>& ft,
                                    const FailureTransducer<double>& result,
                                    int max_len, double tol) {
  CompositionCheck check;
  check.tol = tol;
  std::vector<Symbol> remap = output_symbol_remap(t.osyms, ft.base.isyms);
  std::map<Word, double> actual;
  for (const auto& [word, value] : enumerate_failure(result, max_len).entries)
    actual[word] = value;
  std::map<Word, double> expected;
  for (const auto& [alpha, pair_out] : enumerate(t, max_len).entries) {
    std::optional<Word> beta = remap_word(pair_out.word, remap);
    if (!beta) continue;
    std::optional<double> right = output_of_failure(ft, *beta);
    if (right) expected[alpha] = pair_out.weight * *right;
  }
  auto describe = [&](const Word& w) {
    std::string s = "[";
    for (size_t i = 0; i < w.size(); ++i)
      s += (i ? " " : "") + t.isyms.label(w[i]);
    return s + "]";
  };
  for (const auto& [alpha, value] : expected) {
    ++check.checked;
    auto it = actual.find(alpha);
    if (it == actual.end()) {
      check.pass = false;
      check.mismatches.push_back("missing " + describe(alpha));
    } else if (std::abs(it->second - value) > tol) {
      check.pass = false;
      check.mismatches.push_back("value mismatch on " + describe(alpha));
    }
  }
  for (const auto& [alpha, value] : actual)
    if (!expected.count(alpha)) {
      check.pass = false;
      check.mismatches.push_back("unexpected " + describe(alpha));
    }
  return check;
}

}  // namespace phifst
