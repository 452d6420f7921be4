#include "phifst/star.hpp"

#include "phifst/error.hpp"

namespace phifst {

namespace {

bool unit_output(const PairOutput& out) {
  return out.word.empty() && out.weight == 1.0;
}

// On a trim machine the domain is prefix-free iff no final state has an
// outgoing arc.
bool finals_have_arcs(const Transducer<PairOutput>& m) {
  for (StateId q = 0; q < m.num_states(); ++q)
    if (m.final_output[q] && !m.arcs[q].empty()) return true;
  return false;
}

bool has_in_arcs(const Transducer<PairOutput>& m, StateId target) {
  for (StateId q = 0; q < m.num_states(); ++q)
    for (const Arc<PairOutput>& arc : m.arcs[q])
      if (arc.dst == target) return true;
  return false;
}

}  // namespace

void validate_star_ready(const Transducer<PairOutput>& m) {
  m.check_state(m.initial);
  std::vector<bool> acc = accessible_states(m);
  std::vector<bool> coacc = coaccessible_states(m);
  for (StateId q = 0; q < m.num_states(); ++q)
    if (!acc[q] || !coacc[q])
      throw Error("invariant-violation", "star-normal form: machine not trim");
  if (m.final_output[m.initial])
    throw Error("invariant-violation",
                "star-normal form: initial state is final");
  if (has_in_arcs(m, m.initial))
    throw Error("invariant-violation",
                "star-normal form: initial state has incoming arcs");
  if (!unit_output(m.initial_output))
    throw Error("invariant-violation",
                "star-normal form: initial output is not the unit");
  if (finals_have_arcs(m))
    throw Error("invariant-violation",
                "star-normal form: domain is not prefix-free");
  for (StateId q = 0; q < m.num_states(); ++q)
    if (m.final_output[q] && !unit_output(*m.final_output[q]))
      throw Error("invariant-violation",
                  "star-normal form: final output is not the unit");
}

StarReadyTransducer normalize_for_star(const Transducer<PairOutput>& v) {
  Transducer<PairOutput> m = trim(v);
  if (m.final_output[m.initial])
    throw Error("epsilon-in-domain", "the empty word is accepted");

  StarReadyTransducer result;
  if (finals_have_arcs(m)) {
    // terminator augmentation: move every final output onto a fresh arc
    // labelled with the reserved terminator into a new single final state
    for (StateId q = 0; q < m.num_states(); ++q)
      if (m.find_arc(q, SymbolTable::kDollar))
        throw Error("invariant-violation",
                    "cannot terminator-augment: '$' already in use");
    m.isyms.declare("$");
    StateId dollar_state = m.add_state();
    for (StateId q = 0; q < m.num_states(); ++q) {
      if (q == dollar_state || !m.final_output[q]) continue;
      m.add_arc(q, SymbolTable::kDollar, dollar_state, *m.final_output[q]);
      m.final_output[q].reset();
    }
    m.set_final(dollar_state, one<PairOutput>());
    result.dollar_augmented = true;
  }

  if (has_in_arcs(m, m.initial)) {
    StateId clone = m.add_state();
    for (const Arc<PairOutput> arc : m.arcs[m.initial])
      m.add_arc(clone, arc.sym, arc.dst, arc.out);
    m.initial = clone;
    m = trim(m);  // the old initial may have become unreachable
  }

  if (!unit_output(m.initial_output)) {
    for (Arc<PairOutput>& arc : m.arcs[m.initial])
      arc.out = times(m.initial_output, arc.out);
    m.initial_output = one<PairOutput>();
  }

  // push non-unit final outputs backwards onto incoming arcs; finals have no
  // outgoing arcs here, so only terminating paths are affected
  for (StateId q = 0; q < m.num_states(); ++q)
    for (Arc<PairOutput>& arc : m.arcs[q])
      if (m.final_output[arc.dst] && !unit_output(*m.final_output[arc.dst]))
        arc.out = times(arc.out, *m.final_output[arc.dst]);
  for (StateId q = 0; q < m.num_states(); ++q)
    if (m.final_output[q]) m.final_output[q] = one<PairOutput>();

  validate_star_ready(m);
  result.machine = std::move(m);
  return result;
}

Transducer<PairOutput> star(const StarReadyTransducer& v) {
  const Transducer<PairOutput>& m = v.machine;
  validate_star_ready(m);
  Transducer<PairOutput> out;
  out.isyms = m.isyms;
  out.osyms = m.osyms;
  std::vector<StateId> remap(m.num_states(), kNoState);
  for (StateId q = 0; q < m.num_states(); ++q)
    if (!m.final_output[q]) remap[q] = out.add_state();
  out.initial = remap[m.initial];
  out.initial_output = one<PairOutput>();
  out.set_final(out.initial, one<PairOutput>());
  for (StateId q = 0; q < m.num_states(); ++q) {
    if (m.final_output[q]) continue;
    for (const Arc<PairOutput>& arc : m.arcs[q]) {
      StateId dst =
          m.final_output[arc.dst] ? out.initial : remap[arc.dst];
      out.add_arc(remap[q], arc.sym, dst, arc.out);
    }
  }
  return out;
}

}  // namespace phifst
