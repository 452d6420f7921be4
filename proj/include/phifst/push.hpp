#ifndef PHIFST_PUSH_HPP
#define PHIFST_PUSH_HPP

#include <vector>

#include "phifst/failure.hpp"
#include "phifst/specialized.hpp"
#include "phifst/types.hpp"

namespace phifst {

// Truncation at the factor boundary: boundary states become the only finals
// with unit output and lose their arcs and failure arc. Per-state masses are
// unchanged when every boundary state has mass one.
FailureTransducer<double> truncate_at_boundary(
    const FailureTransducer<double>& w, const std::vector<bool>& boundary);

// Directed graph whose paths from a state correspond one to one to the
// machine's completed transition sequences. Vertices [0, machine_states) are
// the machine states; each state with a failure arc also gets a clone vertex
// at machine_states + i. When augmented, `source` is one extra vertex with
// an edge to every final state weighted by its final output.
struct LabeledGraph {
  struct Edge {
    int src;
    int dst;
    Symbol label;  // kNoSymbol on failure-derived edges
    double weight;
  };

  StateId machine_states = 0;
  std::vector<StateId> clone_origin;
  int source = -1;
  std::vector<Edge> edges;

  int num_vertices() const {
    return machine_states + static_cast<int>(clone_origin.size()) +
           (source >= 0 ? 1 : 0);
  }
};

// Clone vertices carry the arcs the failure target adds on symbols the
// origin lacks, plus the chained failure edge.
LabeledGraph build_cloned_graph(const FailureTransducer<double>& wt);

// Reverses all edges and adds a fresh source vertex with an edge to every
// final state of wt weighted by its final output.
LabeledGraph augment_graph(const LabeledGraph& g,
                           const FailureTransducer<double>& wt);

struct SumTable {
  Semiring semiring = Semiring::kPlusTimes;
  std::vector<double> sums;  // one per machine state
};

// Sum over all source-to-state paths of the edge weight products, by
// topological dynamic programming. Throws cyclic-graph when the graph has a
// cycle.
SumTable state_sums_plus(const LabeledGraph& ag);

// Maximum over all source-to-state paths of the edge weight products, by
// Dijkstra search. Requires every edge weight at most one (otherwise the
// negated logs would be negative); throws negative-log-weight.
SumTable state_sums_max(const LabeledGraph& ag);

// Reweights arcs, failure arcs, the initial and the final outputs by the
// per-state sums. O is unchanged for any positive sums; with the true
// per-state masses the result is canonical for the chosen semiring. Throws
// zero-sum-state when some sum is not positive.
FailureTransducer<double> push_weights(const FailureTransducer<double>& w,
                                       const SumTable& sums);

// Full pipeline: per-state sums of the composed machine followed by
// push_weights. Plus-times sums run on the truncated machine's augmented
// graph; max-times sums run on the full machine's augmented graph.
FailureTransducer<double> canonicalize(const SpecializedMachine& w,
                                       Semiring semiring);

// Per-state sums as used by canonicalize, exposed for inspection.
SumTable pipeline_state_sums(const SpecializedMachine& w, Semiring semiring);

}  // namespace phifst

#endif  // PHIFST_PUSH_HPP
