#include "phifst/specialized.hpp"

#include <map>
#include <set>

#include "phifst/error.hpp"

namespace phifst {

namespace {

std::vector<bool> backward_closure(const Transducer<PairOutput>& v,
                                   const std::vector<StateId>& seeds) {
  std::vector<std::vector<StateId>> rev(v.num_states());
  for (StateId q = 0; q < v.num_states(); ++q)
    for (const Arc<PairOutput>& arc : v.arcs[q]) rev[arc.dst].push_back(q);
  std::vector<bool> seen(v.num_states(), false);
  std::vector<StateId> stack;
  for (StateId q : seeds)
    if (!seen[q]) {
      seen[q] = true;
      stack.push_back(q);
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

std::vector<bool> forward_closure(const Transducer<PairOutput>& v,
                                  const std::vector<StateId>& seeds) {
  std::vector<bool> seen(v.num_states(), false);
  std::vector<StateId> stack;
  for (StateId q : seeds)
    if (!seen[q]) {
      seen[q] = true;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const Arc<PairOutput>& arc : v.arcs[q])
      if (!seen[arc.dst]) {
        seen[arc.dst] = true;
        stack.push_back(arc.dst);
      }
  }
  return seen;
}

}  // namespace

SymbolPartition partition_states(const Transducer<PairOutput>& v) {
  Symbol omega_count = v.osyms.size();
  SymbolPartition part;
  part.arcs.resize(omega_count);
  part.left.resize(omega_count);
  part.right.resize(omega_count);
  for (StateId q = 0; q < v.num_states(); ++q)
    for (const Arc<PairOutput>& arc : v.arcs[q]) {
      if (arc.out.word.size() > 1)
        throw Error("multi-symbol-output",
                    "arc output word longer than one symbol; split upstream");
      if (arc.out.word.size() == 1)
        part.arcs[arc.out.word[0]].emplace_back(q, arc.sym);
    }
  for (Symbol w = 0; w < omega_count; ++w) {
    std::vector<StateId> sources, targets;
    for (auto [src, sym] : part.arcs[w]) {
      sources.push_back(src);
      targets.push_back(v.find_arc(src, sym)->dst);
    }
    part.left[w] = backward_closure(v, sources);
    part.right[w] = forward_closure(v, targets);
  }
  // the classes partition the states of a proper single-symbol-output machine
  for (Symbol w = 0; w < omega_count; ++w)
    for (Symbol u = 0; u < omega_count; ++u)
      for (StateId q = 0; q < v.num_states(); ++q)
        if (part.left[w][q] && part.right[u][q])
          throw Error("precondition-violation",
                      "left and right classes intersect at state " +
                          std::to_string(q));
  for (StateId q = 0; q < v.num_states(); ++q) {
    bool covered = false;
    for (Symbol w = 0; w < omega_count && !covered; ++w)
      covered = part.left[w][q] || part.right[w][q];
    if (!covered)
      throw Error("precondition-violation",
                  "state " + std::to_string(q) +
                      " is in no left or right class; some accepted word "
                      "emits no output symbol");
  }
  return part;
}

StateId e_map(const Transducer<PairOutput>& v, StateId q) {
  v.check_state(q);
  return v.final_output[q] ? v.initial : q;
}

SpecializedMachine compose_specialized(const StarReadyTransducer& v,
                                       const FailureTransducer<double>& ft) {
  const Transducer<PairOutput>& m = v.machine;
  validate_star_ready(m);
  for (StateId q = 0; q < ft.num_states(); ++q) level(ft, q);  // f acyclic
  MonotonicReport mono = check_monotonic(ft);
  if (!mono.pass)
    throw Error("precondition-violation",
                "right machine is not monotonic: " + mono.violations.front());
  std::vector<bool> coacc = coaccessible_states(ft);
  for (StateId q = 0; q < ft.num_states(); ++q)
    if (!coacc[q])
      throw Error("precondition-violation",
                  "right machine state " + std::to_string(q) +
                      " is not co-accessible");

  SymbolPartition part = partition_states(m);
  // map ft input symbol ids to v output symbol ids by label
  std::vector<Symbol> to_omega =
      output_symbol_remap(ft.base.isyms, m.osyms);

  // collect the allowed pairs: left classes against arc sources, redirected
  // right classes against arc targets, plus the initial pair
  std::set<std::pair<StateId, StateId>> pairs;
  pairs.emplace(m.initial, ft.base.initial);
  for (StateId p2 = 0; p2 < ft.num_states(); ++p2)
    for (const Arc<double>& arc2 : ft.base.arcs[p2]) {
      Symbol w = to_omega[arc2.sym];
      if (w == kNoSymbol || part.arcs[w].empty()) continue;
      for (StateId p1 = 0; p1 < m.num_states(); ++p1) {
        if (part.left[w][p1]) pairs.emplace(p1, p2);
        if (part.right[w][p1]) pairs.emplace(e_map(m, p1), arc2.dst);
      }
    }

  SpecializedMachine result;
  FailureTransducer<double>& out = result.machine;
  out.base.isyms = m.isyms;
  std::map<std::pair<StateId, StateId>, StateId> index;
  for (const auto& pair : pairs) {
    index[pair] = out.add_state();
    result.state_pairs.push_back(pair);
    result.boundary.push_back(pair.first == m.initial);
  }
  out.base.initial = index.at({m.initial, ft.base.initial});
  out.base.initial_output = ft.base.initial_output;

  // the union clauses may propose the same arc several times; they must
  // always agree
  auto add_arc_checked = [&](StateId src, Symbol sym, StateId dst, double w) {
    if (const Arc<double>* existing = out.base.find_arc(src, sym)) {
      if (existing->dst != dst || existing->out != w)
        throw Error("invariant-violation",
                    "inconsistent arcs proposed for the same state/symbol");
      return;
    }
    out.base.add_arc(src, sym, dst, w);
  };
  auto set_failure_checked = [&](StateId src, StateId dst, double w) {
    if (out.has_failure(src)) {
      if (out.fail_to[src] != dst || out.fail_out[src] != w)
        throw Error("invariant-violation",
                    "inconsistent failure arcs proposed for the same state");
      return;
    }
    out.set_failure(src, dst, w);
  };

  for (StateId p2 = 0; p2 < ft.num_states(); ++p2)
    for (const Arc<double>& arc2 : ft.base.arcs[p2]) {
      Symbol w = to_omega[arc2.sym];
      if (w == kNoSymbol || part.arcs[w].empty()) continue;
      for (StateId p1 = 0; p1 < m.num_states(); ++p1) {
        if (part.left[w][p1]) {
          StateId src = index.at({p1, p2});
          for (const Arc<PairOutput>& arc1 : m.arcs[p1]) {
            if (arc1.out.word.empty() && part.left[w][arc1.dst]) {
              // internal to the left class
              add_arc_checked(src, arc1.sym, index.at({arc1.dst, p2}),
                              arc1.out.weight);
            } else if (!arc1.out.word.empty() && arc1.out.word[0] == w) {
              // crossing arc consumes the right machine's explicit arc
              add_arc_checked(src, arc1.sym,
                              index.at({e_map(m, arc1.dst), arc2.dst}),
                              arc1.out.weight * arc2.out);
            }
          }
          // monotonicity guarantees the failure target pair exists
          if (ft.fail_to[p2] != kNoState)
            set_failure_checked(src, index.at({p1, ft.fail_to[p2]}),
                                ft.fail_out[p2]);
        }
        if (part.right[w][p1] && !m.final_output[p1]) {
          StateId src = index.at({p1, arc2.dst});
          for (const Arc<PairOutput>& arc1 : m.arcs[p1]) {
            if (!part.right[w][arc1.dst]) continue;
            add_arc_checked(src, arc1.sym,
                            index.at({e_map(m, arc1.dst), arc2.dst}),
                            arc1.out.weight);
          }
        }
      }
    }

  for (StateId p2 = 0; p2 < ft.num_states(); ++p2) {
    if (!ft.base.final_output[p2]) continue;
    auto it = index.find({m.initial, p2});
    if (it != index.end())
      out.base.set_final(it->second, *ft.base.final_output[p2]);
  }

  // A crossing can land on a boundary pair whose right state has no explicit
  // arc on any emitted symbol; the arc loops above never visit it, yet the
  // next factor must still be able to back off. Materialize those failure
  // chains, creating arc-less boundary pairs as needed.
  std::vector<StateId> boundary_work;
  for (StateId q = 0; q < out.num_states(); ++q)
    if (result.state_pairs[q].first == m.initial) boundary_work.push_back(q);
  for (size_t i = 0; i < boundary_work.size(); ++i) {
    StateId q = boundary_work[i];
    StateId p2 = result.state_pairs[q].second;
    if (ft.fail_to[p2] == kNoState || out.has_failure(q)) continue;
    std::pair<StateId, StateId> key{m.initial, ft.fail_to[p2]};
    auto it = index.find(key);
    if (it == index.end()) {
      StateId fresh = out.add_state();
      it = index.emplace(key, fresh).first;
      result.state_pairs.push_back(key);
      result.boundary.push_back(true);
      if (ft.base.final_output[key.second])
        out.base.set_final(fresh, *ft.base.final_output[key.second]);
      boundary_work.push_back(fresh);
    }
    out.set_failure(q, it->second, ft.fail_out[p2]);
  }
  return result;
}

}  // namespace phifst
