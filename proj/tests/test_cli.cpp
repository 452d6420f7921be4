#include <cstdlib>
#include <fstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "phifst/compose.hpp"
#include "phifst/failure.hpp"
#include "phifst/io.hpp"
#include "phifst/push.hpp"
#include "phifst/specialized.hpp"
#include "phifst/star.hpp"
#include "testutil.hpp"

using namespace phifst;
using namespace testutil;

namespace {

std::string temp_path(const std::string& name) {
  return "/tmp/phifst_cli." + std::to_string(getpid()) + "." + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("cli binary is wired into the test environment") {
  REQUIRE(std::getenv("PHIFST_CLI") != nullptr);
  CliResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("compose") != std::string::npos);
}

TEST_CASE("cli pipeline: normalize, compose-special, push, eval") {
  std::string v_norm = temp_path("v_norm.fst");
  std::string w_path = temp_path("w.fst");
  std::string wc_path = temp_path("wc.fst");

  CliResult rn = run_cli("normalize --in " + fixture_path("v.fst") +
                         " --out " + v_norm);
  REQUIRE(rn.exit_code == 0);
  StarReadyTransducer sr = normalize_for_star(fixture_v());
  CHECK(read_file(v_norm) == print_text(sr.machine));

  CliResult rw = run_cli("compose-special --in " + v_norm + " --right " +
                         fixture_path("f1.fst") + " --out " + w_path);
  REQUIRE(rw.exit_code == 0);
  SpecializedMachine w = compose_specialized(sr, fixture_f1());
  CHECK(read_file(w_path) == print_text(w.machine, &w.boundary));

  // every factor already carries mass one, so the push changes nothing
  CliResult rp = run_cli("push --semiring plus --in " + w_path + " --out " +
                         wc_path);
  REQUIRE(rp.exit_code == 0);
  CHECK(read_file(wc_path) == read_file(w_path));

  CliResult re = run_cli("eval --in " + wc_path + " --input 'a $'");
  CHECK(re.exit_code == 0);
  CHECK(re.out == "0.126\n");

  // the generic route computes the same value
  std::string v_star = temp_path("v_star.fst");
  std::string wg_path = temp_path("wg.fst");
  REQUIRE(run_cli("star --in " + v_norm + " --out " + v_star).exit_code == 0);
  REQUIRE(run_cli("compose --in " + v_star + " --right " +
                  fixture_path("f1.fst") + " --out " + wg_path)
              .exit_code == 0);
  CliResult rg = run_cli("eval --in " + wg_path + " --input 'a $'");
  CHECK(rg.exit_code == 0);
  CHECK(rg.out == "0.126\n");
}

TEST_CASE("cli eval and enumerate on pair machines") {
  CliResult r = run_cli("eval --in " + fixture_path("v.fst") +
                        " --input 'a$'");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "x 0.69999999999999996\n");

  CliResult e = run_cli("enumerate --in " + fixture_path("v.fst") +
                        " --max-len 2");
  CHECK(e.exit_code == 0);
  CHECK(e.out ==
        "a,$ x 0.69999999999999996\n"
        "b,$ y 1\n"
        "c,$ x 0.29999999999999999\n");
}

TEST_CASE("cli expand materializes back-off arcs") {
  std::string out_path = temp_path("f1_expanded.fst");
  CliResult r = run_cli("expand --in " + fixture_path("f1.fst") + " --out " +
                        out_path);
  REQUIRE(r.exit_code == 0);
  FailureTransducer<double> expanded;
  expanded.base = expand(fixture_f1());
  expanded.fail_to.assign(expanded.base.num_states(), kNoState);
  expanded.fail_out.assign(expanded.base.num_states(), 1.0);
  CHECK(read_file(out_path) == print_text(expanded));
  CHECK(read_file(out_path).find("0.44999999999999996") != std::string::npos);
  CHECK(read_file(out_path).find("fail") == std::string::npos);
}

TEST_CASE("cli check reports properties and exit codes") {
  CliResult bad = run_cli("check --property stochastic --in " +
                          fixture_path("f1.fst"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.out == "stochastic: FAIL\n");

  CliResult good = run_cli("check --property stochastic --in " +
                           fixture_path("f1_stochastic.fst"));
  CHECK(good.exit_code == 0);
  CHECK(good.out == "stochastic: PASS\n");

  CliResult cond = run_cli("check --property conditional --in " +
                           fixture_path("v.fst"));
  CHECK(cond.exit_code == 0);
  CHECK(cond.out == "conditional: PASS\n");

  CliResult mono = run_cli("check --property monotonic --in " +
                           fixture_path("f1.fst"));
  CHECK(mono.exit_code == 0);

  FailureTransducer<double> jagged;
  Symbol x = jagged.base.isyms.declare("x");
  Symbol y = jagged.base.isyms.declare("y");
  jagged.add_state();
  jagged.add_state();
  jagged.base.initial = 0;
  jagged.base.add_arc(0, x, 1, 0.5);
  jagged.base.add_arc(1, y, 1, 0.5);
  jagged.base.set_final(1, 0.5);
  jagged.set_failure(1, 0, 1.0);
  std::string jagged_path = temp_path("jagged.fst");
  write_file(jagged_path, print_text(jagged));
  CliResult jr = run_cli("check --property monotonic --in " + jagged_path);
  CHECK(jr.exit_code == 1);
  CHECK(jr.out == "monotonic: FAIL\n");

  CliResult prob = run_cli("check --property probabilistic --max-len 14 --in " +
                           fixture_path("f1.fst"));
  CHECK(prob.exit_code == 1);
  CHECK(prob.out == "probabilistic: FAIL (bounded at --max-len 14)\n");

  // a max-times pushed machine is canonical
  std::string v_norm = temp_path("v_norm2.fst");
  std::string w2 = temp_path("w2.fst");
  std::string wc2 = temp_path("wc2.fst");
  REQUIRE(run_cli("normalize --in " + fixture_path("v.fst") + " --out " +
                  v_norm).exit_code == 0);
  REQUIRE(run_cli("compose-special --in " + v_norm + " --right " +
                  fixture_path("f2.fst") + " --out " + w2).exit_code == 0);
  REQUIRE(run_cli("push --semiring max --in " + w2 + " --out " + wc2)
              .exit_code == 0);
  CliResult can = run_cli("check --property canonical --semiring max "
                          "--max-len 10 --in " + wc2);
  CHECK(can.exit_code == 0);
  CHECK(can.out == "canonical: PASS\n");

  CliResult unknown = run_cli("check --property magic --in " +
                              fixture_path("f1.fst"));
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli graph-dump matches the library graph") {
  std::string v_norm = temp_path("v_norm3.fst");
  std::string w_path = temp_path("w3.fst");
  REQUIRE(run_cli("normalize --in " + fixture_path("v.fst") + " --out " +
                  v_norm).exit_code == 0);
  REQUIRE(run_cli("compose-special --in " + v_norm + " --right " +
                  fixture_path("f1_stochastic.fst") + " --out " + w_path)
              .exit_code == 0);
  CliResult r = run_cli("graph-dump --semiring plus --in " + w_path);
  REQUIRE(r.exit_code == 0);

  SpecializedMachine w = compose_specialized(normalize_for_star(fixture_v()),
                                             fixture_f1(0.15));
  FailureTransducer<double> trunc =
      truncate_at_boundary(w.machine, w.boundary);
  LabeledGraph g = augment_graph(build_cloned_graph(trunc), trunc);
  std::string expected;
  for (const LabeledGraph::Edge& e : g.edges) {
    std::string label =
        e.label == kNoSymbol ? "-" : w.machine.base.isyms.label(e.label);
    expected += std::to_string(e.src) + ' ' + std::to_string(e.dst) + ' ' +
                label + ' ' + format_weight(e.weight) + '\n';
  }
  CHECK(r.out == expected);
}

TEST_CASE("cli error paths set the exit code and name the error") {
  CliResult undef = run_cli("eval --in " + fixture_path("f1.fst") +
                            " --input 'zz'");
  CHECK(undef.exit_code == 1);
  CHECK(undef.err.find("undefined-path") != std::string::npos);

  CliResult missing = run_cli("eval --in /nonexistent.fst --input 'a'");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  CliResult nob = run_cli("push --semiring plus --in " +
                          fixture_path("f1.fst"));
  CHECK(nob.exit_code == 1);
  CHECK(nob.err.find("factor boundary") != std::string::npos);

  CliResult badsr = run_cli("push --semiring log --in " +
                            fixture_path("f1.fst"));
  CHECK(badsr.exit_code == 2);
  CHECK(badsr.err.find("bad --semiring") != std::string::npos);

  // a machine whose initial state is final cannot be starred as-is
  std::string badstar = temp_path("badstar.fst");
  write_file(badstar,
             "T pair\n"
             "A $ a\n"
             "O x\n"
             "I 0 - 1\n"
             "E 0 - 1\n"
             "E 2 - 1\n"
             "arc 0 a 1 x 0.5\n"
             "arc 1 $ 2 - 1\n");
  CliResult notnormal = run_cli("star --in " + badstar);
  CHECK(notnormal.exit_code == 1);
  CHECK(notnormal.err.find("star-normal form") != std::string::npos);

  CliResult nosub = run_cli("frobnicate --in x");
  CHECK(nosub.exit_code == 2);

  CliResult noarg = run_cli("eval --in " + fixture_path("f1.fst"));
  CHECK(noarg.exit_code == 2);

  // a cyclic left class cannot be plus-pushed
  std::string vc_norm = temp_path("vc_norm.fst");
  std::string wc = temp_path("wcyc.fst");
  REQUIRE(run_cli("normalize --in " + fixture_path("v_cyclic.fst") +
                  " --out " + vc_norm).exit_code == 0);
  REQUIRE(run_cli("compose-special --in " + vc_norm + " --right " +
                  fixture_path("f1_stochastic.fst") + " --out " + wc)
              .exit_code == 0);
  CliResult cyc = run_cli("push --semiring plus --in " + wc);
  CHECK(cyc.exit_code == 1);
  CHECK(cyc.err.find("cyclic-graph") != std::string::npos);
}
