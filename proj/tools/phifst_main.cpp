// phifst: subsequential failure-transducer toolbox.
//
// Subcommands: compose, star, normalize, compose-special, push, expand,
// eval, enumerate, check, graph-dump. Machines are read and written in the
// line-oriented text format (see include/phifst/io.hpp). Exit codes:
// 0 success, 1 domain error (error name on stderr), 2 usage error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "phifst/checks.hpp"
#include "phifst/compose.hpp"
#include "phifst/error.hpp"
#include "phifst/failure.hpp"
#include "phifst/io.hpp"
#include "phifst/push.hpp"
#include "phifst/specialized.hpp"
#include "phifst/star.hpp"
#include "phifst/transducer.hpp"

namespace {

using namespace phifst;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("usage", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("usage", "cannot open '" + path + "' for writing");
  out << text;
}

ParsedMachine load(const std::string& path) {
  return parse_text(read_file(path));
}

Transducer<PairOutput> load_pair(const std::string& path) {
  ParsedMachine m = load(path);
  if (!m.is_pair)
    throw Error("usage", "'" + path + "': expected a pair machine");
  return std::move(m.pair);
}

FailureTransducer<double> load_failure(const std::string& path) {
  ParsedMachine m = load(path);
  if (m.is_pair)
    throw Error("usage", "'" + path + "': expected a weight-only machine");
  return std::move(m.failure);
}

Semiring parse_semiring(const std::string& s) {
  if (s == "plus") return Semiring::kPlusTimes;
  if (s == "max") return Semiring::kMaxTimes;
  throw Error("usage", "bad --semiring '" + s + "', expected plus or max");
}

SpecializedMachine as_specialized(ParsedMachine&& m,
                                  const std::string& path) {
  if (m.is_pair)
    throw Error("usage", "'" + path + "': expected a weight-only machine");
  SpecializedMachine w;
  w.machine = std::move(m.failure);
  w.boundary = std::move(m.boundary);
  w.boundary.resize(w.machine.base.num_states(), false);
  return w;
}

struct Options {
  std::string in_path;
  std::string right_path;
  std::string out_path;
  std::string semiring = "plus";
  std::string property;
  std::string input;
  int max_len = 6;
  double tol = 1e-9;
  bool accessible_only = true;
};

int run_compose(const Options& opt) {
  Transducer<PairOutput> left = load_pair(opt.in_path);
  FailureTransducer<double> right = load_failure(opt.right_path);
  ComposeResult r = compose(left, right, opt.accessible_only);
  write_output(opt.out_path, print_text(r.machine));
  return 0;
}

int run_normalize(const Options& opt) {
  Transducer<PairOutput> v = load_pair(opt.in_path);
  StarReadyTransducer sr = normalize_for_star(v);
  write_output(opt.out_path, print_text(sr.machine));
  return 0;
}

int run_star(const Options& opt) {
  StarReadyTransducer sr;
  sr.machine = load_pair(opt.in_path);
  validate_star_ready(sr.machine);
  write_output(opt.out_path, print_text(star(sr)));
  return 0;
}

int run_compose_special(const Options& opt) {
  StarReadyTransducer sr;
  sr.machine = load_pair(opt.in_path);
  validate_star_ready(sr.machine);
  FailureTransducer<double> right = load_failure(opt.right_path);
  SpecializedMachine w = compose_specialized(sr, right);
  write_output(opt.out_path, print_text(w.machine, &w.boundary));
  return 0;
}

int run_push(const Options& opt) {
  Semiring sr = parse_semiring(opt.semiring);
  SpecializedMachine w = as_specialized(load(opt.in_path), opt.in_path);
  if (sr == Semiring::kPlusTimes && !std::count(w.boundary.begin(),
                                                w.boundary.end(), true))
    throw Error("precondition-violation",
                "plus-times push needs a factor boundary (B record)");
  FailureTransducer<double> pushed = canonicalize(w, sr);
  write_output(opt.out_path, print_text(pushed, &w.boundary));
  return 0;
}

int run_expand(const Options& opt) {
  FailureTransducer<double> ft = load_failure(opt.in_path);
  FailureTransducer<double> out;
  out.base = expand(ft);
  out.fail_to.assign(out.base.num_states(), kNoState);
  out.fail_out.assign(out.base.num_states(), 1.0);
  write_output(opt.out_path, print_text(out));
  return 0;
}

int run_eval(const Options& opt) {
  ParsedMachine m = load(opt.in_path);
  std::string line;
  if (m.is_pair) {
    Word in = tokenize_input(m.pair.isyms, opt.input);
    std::optional<PairOutput> out = output_of(m.pair, in);
    if (!out)
      throw Error("undefined-path", "O undefined on '" + opt.input + "'");
    line = format_word(m.pair.osyms, out->word) + ' ' +
           format_weight(out->weight) + '\n';
  } else {
    Word in = tokenize_input(m.failure.base.isyms, opt.input);
    std::optional<double> out = output_of_failure(m.failure, in);
    if (!out)
      throw Error("undefined-path", "O undefined on '" + opt.input + "'");
    line = format_weight(*out) + '\n';
  }
  write_output(opt.out_path, line);
  return 0;
}

int run_enumerate(const Options& opt) {
  ParsedMachine m = load(opt.in_path);
  std::string table;
  if (m.is_pair) {
    Enumeration<PairOutput> e = enumerate(m.pair, opt.max_len);
    for (const auto& [in, out] : e.entries)
      table += format_word(m.pair.isyms, in) + ' ' +
               format_word(m.pair.osyms, out.word) + ' ' +
               format_weight(out.weight) + '\n';
  } else {
    Enumeration<double> e = enumerate_failure(m.failure, opt.max_len);
    for (const auto& [in, out] : e.entries)
      table += format_word(m.failure.base.isyms, in) + ' ' +
               format_weight(out) + '\n';
  }
  write_output(opt.out_path, table);
  return 0;
}

// Weight-only properties are defined on the completed behavior, so failure
// machines are expanded first; expansion preserves every per-state O^q.
int run_check(const Options& opt) {
  ParsedMachine m = load(opt.in_path);
  auto expanded = [&]() -> Transducer<double> {
    if (m.is_pair)
      throw Error("usage",
                  "--property " + opt.property + " needs a weight-only machine");
    return m.has_failure_arcs() ? expand(m.failure) : m.failure.base;
  };
  bool pass = false;
  std::ostringstream detail;
  if (opt.property == "stochastic") {
    pass = check_stochastic(expanded(), opt.tol).pass;
  } else if (opt.property == "probabilistic") {
    ProbabilisticReport r =
        check_probabilistic(expanded(), opt.max_len, opt.tol);
    pass = r.pass;
    if (!r.complete) detail << " (bounded at --max-len " << opt.max_len << ')';
  } else if (opt.property == "conditional") {
    if (!m.is_pair) throw Error("usage", "conditional needs a pair machine");
    pass = check_conditional_probabilistic(m.pair, opt.max_len, opt.tol).pass;
  } else if (opt.property == "canonical") {
    pass = check_canonical(expanded(), parse_semiring(opt.semiring),
                           opt.max_len, opt.tol)
               .pass;
  } else if (opt.property == "monotonic") {
    if (m.is_pair)
      throw Error("usage", "monotonic needs a weight-only machine");
    pass = check_monotonic(m.failure).pass;
  } else {
    throw Error("usage", "unknown --property '" + opt.property + "'");
  }
  std::cout << opt.property << ": " << (pass ? "PASS" : "FAIL")
            << detail.str() << '\n';
  return pass ? 0 : 1;
}

int run_graph_dump(const Options& opt) {
  Semiring sr = parse_semiring(opt.semiring);
  SpecializedMachine w = as_specialized(load(opt.in_path), opt.in_path);
  LabeledGraph g;
  if (sr == Semiring::kPlusTimes) {
    if (!std::count(w.boundary.begin(), w.boundary.end(), true))
      throw Error("precondition-violation",
                  "plus-times graph needs a factor boundary (B record)");
    FailureTransducer<double> trunc =
        truncate_at_boundary(w.machine, w.boundary);
    g = augment_graph(build_cloned_graph(trunc), trunc);
  } else {
    g = augment_graph(build_cloned_graph(w.machine), w.machine);
  }
  const SymbolTable& syms = w.machine.base.isyms;
  std::string out;
  for (const LabeledGraph::Edge& e : g.edges) {
    std::string label = e.label == kNoSymbol ? "-" : syms.label(e.label);
    out += std::to_string(e.src) + ' ' + std::to_string(e.dst) + ' ' +
           label + ' ' + format_weight(e.weight) + '\n';
  }
  write_output(opt.out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subsequential failure-transducer toolbox"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool right = false) {
    sub->add_option("--in", opt.in_path, "input machine file")->required();
    if (right)
      sub->add_option("--right", opt.right_path, "second operand file")
          ->required();
    sub->add_option("--out", opt.out_path, "output file (default stdout)");
    return sub;
  };

  CLI::App* c_compose = add_common(
      app.add_subcommand("compose", "generic composition T . F"), true);
  c_compose->add_option("--accessible-only", opt.accessible_only,
                        "restrict to accessible product states");
  add_common(app.add_subcommand(
      "normalize", "bring a pair machine into star-normal form"));
  add_common(app.add_subcommand("star", "Kleene closure of a star-normal "
                                        "pair machine"));
  add_common(app.add_subcommand("compose-special",
                                "composition V* . F avoiding "
                                "non-co-accessible states (takes the "
                                "star-normal V)"),
             true);
  CLI::App* c_push = add_common(
      app.add_subcommand("push", "re-weight to canonical form"));
  c_push->add_option("--semiring", opt.semiring, "plus or max");
  add_common(app.add_subcommand("expand",
                                "eliminate failure transitions"));
  CLI::App* c_eval = add_common(app.add_subcommand("eval", "run one input"));
  c_eval->add_option("--input", opt.input, "input tape")->required();
  CLI::App* c_enum = add_common(
      app.add_subcommand("enumerate", "dump the bounded behavior table"));
  c_enum->add_option("--max-len", opt.max_len, "input length bound");
  CLI::App* c_check =
      add_common(app.add_subcommand("check", "verify a machine property"));
  c_check->add_option("--property", opt.property,
                      "stochastic|probabilistic|conditional|canonical|"
                      "monotonic")
      ->required();
  c_check->add_option("--tol", opt.tol, "comparison tolerance");
  c_check->add_option("--max-len", opt.max_len, "enumeration bound");
  c_check->add_option("--semiring", opt.semiring, "plus or max");
  CLI::App* c_dump = add_common(
      app.add_subcommand("graph-dump", "dump the augmented sum graph"));
  c_dump->add_option("--semiring", opt.semiring, "plus or max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("compose")) return run_compose(opt);
    if (app.got_subcommand("normalize")) return run_normalize(opt);
    if (app.got_subcommand("star")) return run_star(opt);
    if (app.got_subcommand("compose-special")) return run_compose_special(opt);
    if (app.got_subcommand("push")) return run_push(opt);
    if (app.got_subcommand("expand")) return run_expand(opt);
    if (app.got_subcommand("eval")) return run_eval(opt);
    if (app.got_subcommand("enumerate")) return run_enumerate(opt);
    if (app.got_subcommand("check")) return run_check(opt);
    if (app.got_subcommand("graph-dump")) return run_graph_dump(opt);
  } catch (const phifst::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == "usage" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal-error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
