// Python bindings: one opaque Machine handle (either output kind) plus the
// pipeline operations, mirroring the CLI subcommands.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phifst/checks.hpp"
#include "phifst/compose.hpp"
#include "phifst/error.hpp"
#include "phifst/io.hpp"
#include "phifst/push.hpp"
#include "phifst/specialized.hpp"
#include "phifst/star.hpp"

namespace py = pybind11;
using namespace phifst;

namespace {

ParsedMachine wrap_pair(Transducer<PairOutput> t) {
  ParsedMachine m;
  m.is_pair = true;
  m.pair = std::move(t);
  m.boundary.assign(m.pair.num_states(), false);
  return m;
}

ParsedMachine wrap_failure(FailureTransducer<double> ft,
                           std::vector<bool> boundary = {}) {
  ParsedMachine m;
  m.failure = std::move(ft);
  boundary.resize(m.failure.base.num_states(), false);
  m.boundary = std::move(boundary);
  return m;
}

const Transducer<PairOutput>& need_pair(const ParsedMachine& m) {
  if (!m.is_pair) throw Error("usage", "expected a pair machine");
  return m.pair;
}

const FailureTransducer<double>& need_failure(const ParsedMachine& m) {
  if (m.is_pair) throw Error("usage", "expected a weight-only machine");
  return m.failure;
}

Semiring semiring_of(const std::string& s) {
  if (s == "plus") return Semiring::kPlusTimes;
  if (s == "max") return Semiring::kMaxTimes;
  throw Error("usage", "bad semiring '" + s + "', expected plus or max");
}

StarReadyTransducer star_ready(const ParsedMachine& m) {
  StarReadyTransducer sr;
  sr.machine = need_pair(m);
  validate_star_ready(sr.machine);
  return sr;
}

SpecializedMachine specialized_of(const ParsedMachine& m) {
  SpecializedMachine w;
  w.machine = need_failure(m);
  w.boundary = m.boundary;
  w.boundary.resize(w.machine.base.num_states(), false);
  if (!std::count(w.boundary.begin(), w.boundary.end(), true))
    throw Error("precondition-violation",
                "machine carries no factor boundary (B record)");
  return w;
}

Transducer<double> expanded_of(const ParsedMachine& m) {
  const FailureTransducer<double>& ft = need_failure(m);
  return m.has_failure_arcs() ? expand(ft) : ft.base;
}

py::object py_evaluate(const ParsedMachine& m, const std::string& input) {
  if (m.is_pair) {
    Word in = tokenize_input(m.pair.isyms, input);
    std::optional<PairOutput> out = output_of(m.pair, in);
    if (!out)
      throw Error("undefined-path", "O undefined on '" + input + "'");
    return py::make_tuple(format_word(m.pair.osyms, out->word), out->weight);
  }
  Word in = tokenize_input(m.failure.base.isyms, input);
  std::optional<double> out = output_of_failure(m.failure, in);
  if (!out) throw Error("undefined-path", "O undefined on '" + input + "'");
  return py::float_(*out);
}

py::list py_enumerate(const ParsedMachine& m, int max_len) {
  py::list table;
  if (m.is_pair) {
    for (const auto& [in, out] : enumerate(m.pair, max_len).entries)
      table.append(py::make_tuple(format_word(m.pair.isyms, in),
                                  format_word(m.pair.osyms, out.word),
                                  out.weight));
  } else {
    const SymbolTable& syms = m.failure.base.isyms;
    for (const auto& [in, out] : enumerate_failure(m.failure, max_len).entries)
      table.append(py::make_tuple(format_word(syms, in), out));
  }
  return table;
}

bool py_check(const ParsedMachine& m, const std::string& property,
              int max_len, double tol, const std::string& semiring) {
  if (property == "stochastic")
    return check_stochastic(expanded_of(m), tol).pass;
  if (property == "probabilistic")
    return check_probabilistic(expanded_of(m), max_len, tol).pass;
  if (property == "conditional")
    return check_conditional_probabilistic(need_pair(m), max_len, tol).pass;
  if (property == "canonical")
    return check_canonical(expanded_of(m), semiring_of(semiring), max_len, tol)
        .pass;
  if (property == "monotonic") return check_monotonic(need_failure(m)).pass;
  throw Error("usage", "unknown property '" + property + "'");
}

}  // namespace

PYBIND11_MODULE(_phifst, mod) {
  mod.doc() = "subsequential failure-transducer algebra";

  py::register_exception<Error>(mod, "MachineError");

  py::class_<ParsedMachine>(mod, "Machine")
      .def_property_readonly("is_pair",
                             [](const ParsedMachine& m) { return m.is_pair; })
      .def_property_readonly("num_states",
                             [](const ParsedMachine& m) {
                               return m.is_pair ? m.pair.num_states()
                                                : m.failure.base.num_states();
                             })
      .def("__str__", [](const ParsedMachine& m) { return print_text(m); });

  mod.def("parse", &parse_text, py::arg("text"));
  mod.def("print_text",
          [](const ParsedMachine& m) { return print_text(m); },
          py::arg("machine"));
  mod.def("evaluate", &py_evaluate, py::arg("machine"), py::arg("input"));
  mod.def("enumerate_table", &py_enumerate, py::arg("machine"),
          py::arg("max_len") = 6);
  mod.def("expand_failures",
          [](const ParsedMachine& m) {
            FailureTransducer<double> out;
            out.base = expanded_of(m);
            out.fail_to.assign(out.base.num_states(), kNoState);
            out.fail_out.assign(out.base.num_states(), 1.0);
            return wrap_failure(std::move(out));
          },
          py::arg("machine"));
  mod.def("compose",
          [](const ParsedMachine& left, const ParsedMachine& right) {
            return wrap_failure(
                compose(need_pair(left), need_failure(right)).machine);
          },
          py::arg("left"), py::arg("right"));
  mod.def("normalize",
          [](const ParsedMachine& m) {
            return wrap_pair(normalize_for_star(need_pair(m)).machine);
          },
          py::arg("machine"));
  mod.def("star",
          [](const ParsedMachine& m) { return wrap_pair(star(star_ready(m))); },
          py::arg("machine"));
  mod.def("compose_special",
          [](const ParsedMachine& left, const ParsedMachine& right) {
            SpecializedMachine w =
                compose_specialized(star_ready(left), need_failure(right));
            return wrap_failure(std::move(w.machine), std::move(w.boundary));
          },
          py::arg("left"), py::arg("right"));
  mod.def("push",
          [](const ParsedMachine& m, const std::string& semiring) {
            SpecializedMachine w = specialized_of(m);
            return wrap_failure(canonicalize(w, semiring_of(semiring)),
                                w.boundary);
          },
          py::arg("machine"), py::arg("semiring") = "plus");
  mod.def("check", &py_check, py::arg("machine"), py::arg("property"),
          py::arg("max_len") = 6, py::arg("tol") = 1e-9,
          py::arg("semiring") = "plus");
}
