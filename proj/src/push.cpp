#include "phifst/push.hpp"

#include <algorithm>
#include <queue>

#include "phifst/error.hpp"

namespace phifst {

FailureTransducer<double> truncate_at_boundary(
    const FailureTransducer<double>& w, const std::vector<bool>& boundary) {
  if (boundary.size() != static_cast<size_t>(w.num_states()))
    throw Error("invariant-violation",
                "boundary mask does not match the state count");
  FailureTransducer<double> out = w;
  for (StateId q = 0; q < out.num_states(); ++q) {
    if (boundary[q]) {
      out.base.arcs[q].clear();
      out.base.final_output[q] = 1.0;
      out.fail_to[q] = kNoState;
      out.fail_out[q] = 1.0;
    } else {
      out.base.final_output[q].reset();
    }
  }
  return out;
}

LabeledGraph build_cloned_graph(const FailureTransducer<double>& wt) {
  for (StateId q = 0; q < wt.num_states(); ++q) level(wt, q);  // f acyclic
  LabeledGraph g;
  g.machine_states = wt.num_states();
  std::vector<int> clone_vertex(wt.num_states(), -1);
  for (StateId q = 0; q < wt.num_states(); ++q)
    if (wt.fail_to[q] != kNoState) {
      clone_vertex[q] = g.machine_states +
                        static_cast<int>(g.clone_origin.size());
      g.clone_origin.push_back(q);
    }
  for (StateId q = 0; q < wt.num_states(); ++q) {
    for (const Arc<double>& arc : wt.base.arcs[q])
      g.edges.push_back({q, arc.dst, arc.sym, arc.out});
    StateId f = wt.fail_to[q];
    if (f == kNoState) continue;
    g.edges.push_back({q, clone_vertex[q], kNoSymbol, wt.fail_out[q]});
    // the clone continues only on symbols the origin does not define itself
    for (const Arc<double>& arc : wt.base.arcs[f])
      if (!wt.base.find_arc(q, arc.sym))
        g.edges.push_back({clone_vertex[q], arc.dst, arc.sym, arc.out});
    if (wt.fail_to[f] != kNoState)
      g.edges.push_back(
          {clone_vertex[q], clone_vertex[f], kNoSymbol, wt.fail_out[f]});
  }
  return g;
}

LabeledGraph augment_graph(const LabeledGraph& g,
                           const FailureTransducer<double>& wt) {
  LabeledGraph out;
  out.machine_states = g.machine_states;
  out.clone_origin = g.clone_origin;
  out.source = g.machine_states + static_cast<int>(g.clone_origin.size());
  for (const LabeledGraph::Edge& e : g.edges)
    out.edges.push_back({e.dst, e.src, e.label, e.weight});
  for (StateId q = 0; q < wt.num_states(); ++q)
    if (wt.base.final_output[q])
      out.edges.push_back(
          {out.source, q, kNoSymbol, *wt.base.final_output[q]});
  return out;
}

SumTable state_sums_plus(const LabeledGraph& ag) {
  if (ag.source < 0)
    throw Error("invariant-violation", "graph is not augmented");
  int n = ag.num_vertices();
  std::vector<std::vector<int>> out_edges(n);
  std::vector<int> in_degree(n, 0);
  for (int i = 0; i < static_cast<int>(ag.edges.size()); ++i) {
    out_edges[ag.edges[i].src].push_back(i);
    ++in_degree[ag.edges[i].dst];
  }
  std::vector<int> order;
  order.reserve(n);
  for (int v = 0; v < n; ++v)
    if (in_degree[v] == 0) order.push_back(v);
  for (size_t i = 0; i < order.size(); ++i)
    for (int e : out_edges[order[i]])
      if (--in_degree[ag.edges[e].dst] == 0)
        order.push_back(ag.edges[e].dst);
  if (static_cast<int>(order.size()) != n)
    throw Error("cyclic-graph",
                "path sums need an acyclic graph; topological order stuck at " +
                    std::to_string(order.size()) + " of " + std::to_string(n) +
                    " vertices");
  std::vector<double> sum(n, 0.0);
  sum[ag.source] = 1.0;
  for (int v : order)
    for (int e : out_edges[v])
      sum[ag.edges[e].dst] += sum[v] * ag.edges[e].weight;
  SumTable table;
  table.semiring = Semiring::kPlusTimes;
  table.sums.assign(sum.begin(), sum.begin() + ag.machine_states);
  return table;
}

SumTable state_sums_max(const LabeledGraph& ag) {
  if (ag.source < 0)
    throw Error("invariant-violation", "graph is not augmented");
  for (const LabeledGraph::Edge& e : ag.edges)
    if (e.weight > 1.0)
      throw Error("negative-log-weight",
                  "edge weight " + std::to_string(e.weight) +
                      " exceeds 1; its negated log is negative");
  int n = ag.num_vertices();
  std::vector<std::vector<int>> out_edges(n);
  for (int i = 0; i < static_cast<int>(ag.edges.size()); ++i)
    out_edges[ag.edges[i].src].push_back(i);
  // Dijkstra directly in the max-times semiring: weights in [0, 1] make the
  // best path product monotonically non-increasing
  std::vector<double> best(n, 0.0);
  std::vector<bool> settled(n, false);
  std::priority_queue<std::pair<double, int>> frontier;
  best[ag.source] = 1.0;
  frontier.emplace(1.0, ag.source);
  while (!frontier.empty()) {
    auto [value, v] = frontier.top();
    frontier.pop();
    if (settled[v]) continue;
    settled[v] = true;
    for (int e : out_edges[v]) {
      int u = ag.edges[e].dst;
      double candidate = value * ag.edges[e].weight;
      if (candidate > best[u]) {
        best[u] = candidate;
        frontier.emplace(candidate, u);
      }
    }
  }
  SumTable table;
  table.semiring = Semiring::kMaxTimes;
  table.sums.assign(best.begin(), best.begin() + ag.machine_states);
  return table;
}

FailureTransducer<double> push_weights(const FailureTransducer<double>& w,
                                       const SumTable& sums) {
  if (sums.sums.size() != static_cast<size_t>(w.num_states()))
    throw Error("invariant-violation",
                "sum table does not match the state count");
  for (StateId q = 0; q < w.num_states(); ++q)
    if (!(sums.sums[q] > 0.0))
      throw Error("zero-sum-state", "state " + std::to_string(q) +
                                        " has sum " +
                                        std::to_string(sums.sums[q]));
  const std::vector<double>& s = sums.sums;
  FailureTransducer<double> out = w;
  for (StateId q = 0; q < out.num_states(); ++q) {
    for (Arc<double>& arc : out.base.arcs[q])
      arc.out = arc.out * s[arc.dst] / s[q];
    if (out.base.final_output[q])
      out.base.final_output[q] = *out.base.final_output[q] / s[q];
    if (out.fail_to[q] != kNoState)
      out.fail_out[q] = out.fail_out[q] * s[out.fail_to[q]] / s[q];
  }
  out.base.initial_output =
      out.base.initial_output * s[out.base.initial];
  return out;
}

SumTable pipeline_state_sums(const SpecializedMachine& w, Semiring semiring) {
  if (semiring == Semiring::kPlusTimes) {
    FailureTransducer<double> wt =
        truncate_at_boundary(w.machine, w.boundary);
    return state_sums_plus(augment_graph(build_cloned_graph(wt), wt));
  }
  return state_sums_max(
      augment_graph(build_cloned_graph(w.machine), w.machine));
}

FailureTransducer<double> canonicalize(const SpecializedMachine& w,
                                       Semiring semiring) {
  return push_weights(w.machine, pipeline_state_sums(w, semiring));
}

}  // namespace phifst
