#ifndef PHIFST_COMPOSE_HPP
#define PHIFST_COMPOSE_HPP

#include <string>
#include <utility>
#include <vector>

#include "phifst/failure.hpp"
#include "phifst/transducer.hpp"

namespace phifst {

// Composition of a pair-output transducer with a weight failure transducer.
// States are pairs; `state_pairs` records the (left, right) origin of each
// result state.
struct ComposeResult {
  FailureTransducer<double> machine;
  std::vector<std::pair<StateId, StateId>> state_pairs;
};

// T's output words are consumed by ft. An arc whose output word starts with
// a symbol without an explicit arc at the current right state is omitted (no
// failure walk for the first symbol); later symbols follow completed steps,
// and a dead walk also omits the arc. With accessible_only the state set is
// the reachable part (arcs and failure arcs); otherwise the full product is
// materialized.
ComposeResult compose(const Transducer<PairOutput>& t,
                      const FailureTransducer<double>& ft,
                      bool accessible_only = true);

// Symbol id remap from a pair machine's output table into a failure
// machine's input table, matching by label. Unknown labels map to kNoSymbol.
std::vector<Symbol> output_symbol_remap(const SymbolTable& from,
                                        const SymbolTable& to);

struct CompositionCheck {
  bool pass = true;
  double tol = 0.0;
  int checked = 0;
  std::vector<std::string> mismatches;
};

// Exhaustive check of the defining property on all inputs up to max_len:
// result accepts alpha iff t does and ft accepts the projected word, with
// value Proj2(O_t(alpha)) * O_ft(Proj1(O_t(alpha))).
CompositionCheck verify_composition(const Transducer<PairOutput>& t,
                                    const FailureTransducer<double>& ft,
                                    const FailureTransducer<double>& result,
                                    int max_len, double tol);

}  // namespace phifst

#endif  // PHIFST_COMPOSE_HPP
