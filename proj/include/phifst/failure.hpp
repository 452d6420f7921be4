#ifndef PHIFST_FAILURE_HPP
#define PHIFST_FAILURE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phifst/error.hpp"
#include "phifst/transducer.hpp"
#include "phifst/types.hpp"

namespace phifst {

// Transducer with failure (back-off) arcs: at most one per state, taken for
// symbols with no explicit arc. Dom(f) == Dom(phi) by construction.
template <class M>
struct FailureTransducer {
  Transducer<M> base;
  std::vector<StateId> fail_to;
  std::vector<M> fail_out;

  StateId num_states() const { return base.num_states(); }

  StateId add_state() {
    StateId q = base.add_state();
    fail_to.push_back(kNoState);
    fail_out.push_back(one<M>());
    return q;
  }

  bool has_failure(StateId q) const {
    base.check_state(q);
    return fail_to[q] != kNoState;
  }

  void set_failure(StateId q, StateId r, M out) {
    base.check_state(q);
    base.check_state(r);
    fail_to[q] = r;
    fail_out[q] = std::move(out);
  }
};

// Explicit arc symbols at q, ascending.
template <class M>
std::vector<Symbol> signature(const FailureTransducer<M>& ft, StateId q) {
  ft.base.check_state(q);
  std::vector<Symbol> out;
  out.reserve(ft.base.arcs[q].size());
  for (const Arc<M>& arc : ft.base.arcs[q]) out.push_back(arc.sym);
  return out;
}

// Length of the failure chain from q. Throws when the chain cycles.
template <class M>
int level(const FailureTransducer<M>& ft, StateId q) {
  ft.base.check_state(q);
  int n = 0;
  for (StateId p = q; ft.fail_to[p] != kNoState; p = ft.fail_to[p]) {
    if (++n > ft.num_states())
      throw Error("precondition-violation", "failure graph has a cycle");
  }
  return n;
}

namespace detail {
template <class M>
std::optional<std::pair<StateId, M>> completed_step_rec(
    const FailureTransducer<M>& ft, StateId q, Symbol a, int depth) {
  if (const Arc<M>* arc = ft.base.find_arc(q, a))
    return std::make_pair(arc->dst, arc->out);
  if (ft.fail_to[q] == kNoState) return std::nullopt;
  // a chain longer than the state count has wrapped a failure cycle without
  // finding the symbol, so the step is undefined (smallest-relation reading)
  if (depth > ft.num_states()) return std::nullopt;
  auto r = completed_step_rec(ft, ft.fail_to[q], a, depth + 1);
  if (!r) return std::nullopt;
  // multiply outward so the lazy walk, the memo table and expansion all
  // associate identically
  return std::make_pair(r->first, times(ft.fail_out[q], r->second));
}
}  // namespace detail

// delta_f / lambda_f for one symbol: explicit arc if present, otherwise the
// failure chain is walked.
template <class M>
std::optional<std::pair<StateId, M>> completed_step(
    const FailureTransducer<M>& ft, StateId q, Symbol a) {
  ft.base.check_state(q);
  ft.base.check_input_symbol(a);
  return detail::completed_step_rec(ft, q, a, 0);
}

template <class M>
std::optional<std::pair<StateId, M>> completed_run(
    const FailureTransducer<M>& ft, StateId q, const Word& word) {
  ft.base.check_state(q);
  M acc = one<M>();
  for (Symbol a : word) {
    auto step = completed_step(ft, q, a);
    if (!step) return std::nullopt;
    acc = times(acc, step->second);
    q = step->first;
  }
  return std::make_pair(q, std::move(acc));
}

template <class M>
std::optional<M> output_of_failure(const FailureTransducer<M>& ft,
                                   const Word& word) {
  auto r = completed_run(ft, ft.base.initial, word);
  if (!r || !ft.base.is_final(r->first)) return std::nullopt;
  return times(times(ft.base.initial_output, r->second),
               *ft.base.final_output[r->first]);
}

// Union of explicit symbols along the failure chain, ascending. The walk
// stops on revisits, so chains with cycles are fine; the result is exactly
// the set of symbols completed_step can resolve from q.
template <class M>
std::vector<Symbol> completed_signature(const FailureTransducer<M>& ft,
                                        StateId q) {
  ft.base.check_state(q);
  std::vector<Symbol> syms;
  std::vector<bool> seen(ft.num_states(), false);
  for (StateId p = q; p != kNoState && !seen[p]; p = ft.fail_to[p]) {
    seen[p] = true;
    for (const Arc<M>& arc : ft.base.arcs[p]) syms.push_back(arc.sym);
  }
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

// Dense memoized table of completed transitions, indexed [state][symbol].
// Agrees bit for bit with the lazy walk.
template <class M>
class CompletedTable {
 public:
  explicit CompletedTable(const FailureTransducer<M>& ft) {
    StateId n = ft.num_states();
    Symbol m = ft.base.isyms.size();
    table_.assign(static_cast<size_t>(n) * m, std::nullopt);
    // fill in ascending failure-chain level so fail_to rows are ready
    std::vector<std::pair<int, StateId>> order(n);
    for (StateId q = 0; q < n; ++q) order[q] = {level(ft, q), q};
    std::sort(order.begin(), order.end());
    for (auto [lvl, q] : order) {
      for (Symbol a = 0; a < m; ++a) {
        if (const Arc<M>* arc = ft.base.find_arc(q, a)) {
          at(q, a, m) = std::make_pair(arc->dst, arc->out);
        } else if (ft.fail_to[q] != kNoState) {
          const auto& inherited = at(ft.fail_to[q], a, m);
          if (inherited)
            at(q, a, m) = std::make_pair(
                inherited->first, times(ft.fail_out[q], inherited->second));
        }
      }
    }
    symbols_ = m;
  }

  const std::optional<std::pair<StateId, M>>& lookup(StateId q,
                                                     Symbol a) const {
    return table_[static_cast<size_t>(q) * symbols_ + a];
  }

 private:
  std::optional<std::pair<StateId, M>>& at(StateId q, Symbol a, Symbol m) {
    return table_[static_cast<size_t>(q) * m + a];
  }

  std::vector<std::optional<std::pair<StateId, M>>> table_;
  Symbol symbols_ = 0;
};

// Materializes every completed transition as an explicit arc and drops the
// failure arcs. O is unchanged.
template <class M>
Transducer<M> expand(const FailureTransducer<M>& ft) {
  for (StateId q = 0; q < ft.num_states(); ++q) level(ft, q);  // cycle check
  CompletedTable<M> table(ft);
  Transducer<M> out;
  out.isyms = ft.base.isyms;
  out.osyms = ft.base.osyms;
  out.initial = ft.base.initial;
  out.initial_output = ft.base.initial_output;
  for (StateId q = 0; q < ft.num_states(); ++q) out.add_state();
  for (StateId q = 0; q < ft.num_states(); ++q) {
    if (ft.base.final_output[q]) out.set_final(q, *ft.base.final_output[q]);
    for (Symbol a = 0; a < ft.base.isyms.size(); ++a)
      if (const auto& step = table.lookup(q, a))
        out.add_arc(q, a, step->first, step->second);
  }
  return out;
}

// Accepted inputs of the failure machine via lazy completed steps, same
// ordering contract as enumerate(). Independent of expand().
namespace detail {
template <class M>
void enumerate_failure_rec(const FailureTransducer<M>& ft, StateId q,
                           const M& acc, Word& word, int max_len,
                           Enumeration<M>& out) {
  if (ft.base.final_output[q])
    out.entries.emplace_back(word, times(acc, *ft.base.final_output[q]));
  std::vector<Symbol> syms = completed_signature(ft, q);
  if (static_cast<int>(word.size()) == max_len) {
    if (!syms.empty()) out.open.emplace_back(word, acc);
    return;
  }
  for (Symbol a : syms) {
    auto step = detail::completed_step_rec(ft, q, a, 0);
    word.push_back(a);
    enumerate_failure_rec(ft, step->first, times(acc, step->second), word,
                          max_len, out);
    word.pop_back();
  }
}
}  // namespace detail

// Works on machines with failure cycles too: the completed semantics stays
// total, a chain that wraps without finding the symbol is just undefined.
template <class M>
Enumeration<M> enumerate_failure(const FailureTransducer<M>& ft, int max_len) {
  ft.base.check_state(ft.base.initial);
  Enumeration<M> out;
  Word word;
  detail::enumerate_failure_rec(ft, ft.base.initial, ft.base.initial_output,
                                word, max_len, out);
  return out;
}

struct MonotonicReport {
  bool pass = true;
  std::vector<std::string> violations;
};

// Monotonic: failure preserves finality and explicit definedness.
template <class M>
MonotonicReport check_monotonic(const FailureTransducer<M>& ft) {
  MonotonicReport report;
  for (StateId q = 0; q < ft.num_states(); ++q) {
    StateId r = ft.fail_to[q];
    if (r == kNoState) continue;
    if (ft.base.final_output[q] && !ft.base.final_output[r]) {
      report.pass = false;
      report.violations.push_back("state " + std::to_string(q) +
                                  " is final but its failure state " +
                                  std::to_string(r) + " is not");
    }
    for (const Arc<M>& arc : ft.base.arcs[q])
      if (!ft.base.find_arc(r, arc.sym)) {
        report.pass = false;
        report.violations.push_back(
            "state " + std::to_string(q) + " has an explicit arc on symbol " +
            std::to_string(arc.sym) + " but its failure state " +
            std::to_string(r) + " does not");
      }
  }
  return report;
}

// States lying on a cycle of the failure graph.
template <class M>
std::vector<bool> failure_cycle_states(const FailureTransducer<M>& ft) {
  StateId n = ft.num_states();
  std::vector<bool> on_cycle(n, false);
  std::vector<int> mark(n, 0);  // 0 fresh, >0 visit epoch, -1 resolved
  for (StateId root = 0; root < n; ++root) {
    if (mark[root] != 0) continue;
    std::vector<StateId> path;
    StateId q = root;
    while (q != kNoState && mark[q] == 0) {
      mark[q] = 1;
      path.push_back(q);
      q = ft.fail_to[q];
    }
    if (q != kNoState && mark[q] == 1) {
      // found a new cycle: everything from q onwards in path
      auto it = std::find(path.begin(), path.end(), q);
      for (auto jt = it; jt != path.end(); ++jt) on_cycle[*jt] = true;
    }
    for (StateId p : path) mark[p] = -1;
  }
  return on_cycle;
}

template <class M>
bool has_failure_cycles(const FailureTransducer<M>& ft) {
  auto c = failure_cycle_states(ft);
  return std::find(c.begin(), c.end(), true) != c.end();
}

// Drops the failure arc of every state on a failure cycle. Requires a
// monotonic machine; then those arcs can never change O (along a failure
// cycle all signatures coincide, so the chain is never entered on a defined
// symbol).
template <class M>
FailureTransducer<M> remove_failure_cycles(const FailureTransducer<M>& ft) {
  MonotonicReport mono = check_monotonic(ft);
  if (!mono.pass)
    throw Error("not-monotonic",
                mono.violations.empty() ? "machine is not monotonic"
                                        : mono.violations.front());
  std::vector<bool> on_cycle = failure_cycle_states(ft);
  FailureTransducer<M> out = ft;
  for (StateId q = 0; q < ft.num_states(); ++q)
    if (on_cycle[q]) {
      out.fail_to[q] = kNoState;
      out.fail_out[q] = one<M>();
    }
  return out;
}

// Co-accessibility w.r.t. the machine's semantics, i.e. over completed arcs.
template <class M>
std::vector<bool> coaccessible_states(const FailureTransducer<M>& ft) {
  StateId n = ft.num_states();
  std::vector<std::vector<StateId>> rev(n);
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack;
  for (StateId q = 0; q < n; ++q) {
    for (Symbol a : completed_signature(ft, q)) {
      auto step = detail::completed_step_rec(ft, q, a, 0);
      rev[step->first].push_back(q);
    }
    if (ft.base.final_output[q]) {
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

}  // namespace phifst

#endif  // PHIFST_FAILURE_HPP
