#ifndef PHIFST_SPECIALIZED_HPP
#define PHIFST_SPECIALIZED_HPP

#include <utility>
#include <vector>

#include "phifst/compose.hpp"
#include "phifst/failure.hpp"
#include "phifst/star.hpp"

namespace phifst {

// Per output symbol omega of a star-normalized single-symbol-output machine:
// the arcs emitting omega, the states with a path to such an arc's source
// (left class) and the states reachable from such an arc's target (right
// class). Indexed by output symbol id.
struct SymbolPartition {
  // (source state, input symbol) of each omega-emitting arc
  std::vector<std::vector<std::pair<StateId, Symbol>>> arcs;
  std::vector<std::vector<bool>> left;
  std::vector<std::vector<bool>> right;
};

// Throws multi-symbol-output when some arc emits a word longer than one
// symbol; throws precondition-violation when the left/right classes are not
// pairwise disjoint or do not cover the state set.
SymbolPartition partition_states(const Transducer<PairOutput>& v);

// Redirects final states to the initial state, identity elsewhere.
StateId e_map(const Transducer<PairOutput>& v, StateId q);

// Composition of the star closure with a failure machine, built without the
// non-co-accessible states of the generic construction. `boundary` marks the
// states whose left coordinate is the initial state of v (the factor
// boundary rows); `state_pairs` records the origin of each state.
struct SpecializedMachine {
  FailureTransducer<double> machine;
  std::vector<std::pair<StateId, StateId>> state_pairs;
  std::vector<bool> boundary;
};

// Equivalent to compose(star(v), ft) with every state co-accessible.
// Requires v star-normalized with single-symbol arc outputs and ft monotonic,
// free of failure cycles, with every state co-accessible.
SpecializedMachine compose_specialized(const StarReadyTransducer& v,
                                       const FailureTransducer<double>& ft);

}  // namespace phifst

#endif  // PHIFST_SPECIALIZED_HPP
