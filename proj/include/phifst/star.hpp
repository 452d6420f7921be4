#ifndef PHIFST_STAR_HPP
#define PHIFST_STAR_HPP

#include "phifst/transducer.hpp"

namespace phifst {

// A pair transducer in star-normal form: trim, prefix-free domain (final
// states have no outgoing arcs), no arcs into the initial state, initial not
// final, unit initial output, all final outputs unit.
struct StarReadyTransducer {
  Transducer<PairOutput> machine;
  bool dollar_augmented = false;
};

// Throws invariant-violation naming the first violated condition.
void validate_star_ready(const Transducer<PairOutput>& m);

// Establishes star-normal form without changing O except for the terminator
// marker: trims, terminator-augments when the domain is not prefix-free,
// clones the initial state when it has in-arcs, then pushes the initial and
// final outputs onto arcs. Idempotent. Throws epsilon-in-domain when the
// empty word is accepted.
StarReadyTransducer normalize_for_star(const Transducer<PairOutput>& v);

// Kleene closure: arcs entering a final state are redirected to the initial
// state, final states are dropped, the initial state becomes the only final.
Transducer<PairOutput> star(const StarReadyTransducer& v);

}  // namespace phifst

#endif  // PHIFST_STAR_HPP
