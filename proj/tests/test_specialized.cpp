#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "phifst/error.hpp"
#include "phifst/io.hpp"
#include "phifst/specialized.hpp"
#include "testutil.hpp"

using namespace phifst;
using namespace testutil;

namespace {

// domain and weights of two failure machines agree up to the horizon
void check_same_behaviour(const FailureTransducer<double>& a,
                          const FailureTransducer<double>& b, int horizon,
                          double tol) {
  std::map<Word, double> ea = entry_map(enumerate_failure(a, horizon).entries);
  std::map<Word, double> eb = entry_map(enumerate_failure(b, horizon).entries);
  REQUIRE(ea.size() == eb.size());
  for (const auto& [word, value] : ea) {
    auto it = eb.find(word);
    REQUIRE(it != eb.end());
    CHECK(value == doctest::Approx(it->second).epsilon(tol));
  }
}

bool all_true(const std::vector<bool>& v) {
  for (bool b : v)
    if (!b) return false;
  return true;
}

}  // namespace

TEST_CASE("state partition of the parallel-factor machine") {
  Transducer<PairOutput> v = fixture_v();
  SymbolPartition part = partition_states(v);
  Symbol x = v.osyms.find("x"), y = v.osyms.find("y");
  REQUIRE(part.arcs.size() == 3);  // slot 0 is the reserved terminator
  CHECK(part.arcs[SymbolTable::kDollar].empty());
  REQUIRE(part.arcs[x].size() == 2);
  CHECK(part.arcs[x][0] == std::pair<StateId, Symbol>{0, v.isyms.find("a")});
  CHECK(part.arcs[x][1] == std::pair<StateId, Symbol>{0, v.isyms.find("c")});
  REQUIRE(part.arcs[y].size() == 1);
  CHECK(part.arcs[y][0] == std::pair<StateId, Symbol>{0, v.isyms.find("b")});
  CHECK(part.left[x] == std::vector<bool>{true, false, false});
  CHECK(part.right[x] == std::vector<bool>{false, true, true});
  CHECK(part.left[y] == std::vector<bool>{true, false, false});
  CHECK(part.right[y] == std::vector<bool>{false, true, true});
}

TEST_CASE("state partition with distinct per-symbol classes") {
  Transducer<PairOutput> v = fixture_v_split();
  SymbolPartition part = partition_states(v);
  Symbol x = v.osyms.find("x"), y = v.osyms.find("y");
  CHECK(part.left[x] == std::vector<bool>{true, false, false, false, false});
  CHECK(part.right[x] == std::vector<bool>{false, true, false, false, true});
  // the epsilon-output b arc keeps the initial state in the y left class too
  CHECK(part.left[y] == std::vector<bool>{true, false, true, false, false});
  CHECK(part.right[y] == std::vector<bool>{false, false, false, true, true});
}

TEST_CASE("partition rejects multi-symbol arc outputs") {
  Transducer<PairOutput> v;
  Symbol a = v.isyms.declare("a");
  Symbol x = v.osyms.declare("x");
  Symbol y = v.osyms.declare("y");
  v.add_state();
  v.add_state();
  v.initial = 0;
  v.add_arc(0, a, 1, {{x, y}, 1.0});
  v.set_final(1, {{}, 1.0});
  try {
    partition_states(v);
    FAIL("partition accepted a two-symbol output");
  } catch (const Error& e) {
    CHECK(e.code() == "multi-symbol-output");
  }
}

TEST_CASE("partition rejects words that emit nothing") {
  Transducer<PairOutput> v;
  Symbol a = v.isyms.declare("a");
  v.osyms.declare("x");
  v.add_state();
  v.add_state();
  v.initial = 0;
  v.add_arc(0, a, 1, {{}, 1.0});
  v.set_final(1, {{}, 1.0});
  CHECK_THROWS_WITH_AS(partition_states(v),
                       doctest::Contains("emits no output symbol"), Error);
}

TEST_CASE("partition rejects intersecting left and right classes") {
  // two x arcs in sequence: the middle state precedes one and follows the
  // other
  Transducer<PairOutput> v;
  Symbol d = v.isyms.declare("$");
  Symbol a = v.isyms.declare("a");
  Symbol b = v.isyms.declare("b");
  Symbol x = v.osyms.declare("x");
  for (int i = 0; i < 4; ++i) v.add_state();
  v.initial = 0;
  v.add_arc(0, a, 1, {{x}, 1.0});
  v.add_arc(1, b, 2, {{x}, 1.0});
  v.add_arc(2, d, 3, {{}, 1.0});
  v.set_final(3, {{}, 1.0});
  CHECK_THROWS_WITH_AS(partition_states(v), doctest::Contains("intersect"),
                       Error);
}

TEST_CASE("final states redirect to the initial state") {
  Transducer<PairOutput> v = fixture_v();
  CHECK(e_map(v, 0) == 0);
  CHECK(e_map(v, 1) == 1);
  CHECK(e_map(v, 2) == 0);
}

TEST_CASE("specialized composition of the fixture pipeline") {
  StarReadyTransducer n = normalize_for_star(fixture_v());
  FailureTransducer<double> f1 = fixture_f1();
  SpecializedMachine w = compose_specialized(n, f1);

  REQUIRE(w.machine.num_states() == 5);
  std::vector<std::pair<StateId, StateId>> pairs{
      {0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}};
  CHECK(w.state_pairs == pairs);
  CHECK(w.boundary == std::vector<bool>{true, true, true, false, false});
  CHECK(w.machine.base.initial == 0);
  CHECK(w.machine.base.initial_output == 1.0);

  CHECK(print_text(w.machine, &w.boundary) ==
        "T weight-only\n"
        "A $ a b c\n"
        "I 0 1\n"
        "E 0 0.10000000000000001\n"
        "E 1 0.29999999999999999\n"
        "E 2 0.20000000000000001\n"
        "arc 0 a 3 0.41999999999999998\n"
        "arc 0 b 4 0.29999999999999999\n"
        "arc 0 c 3 0.17999999999999999\n"
        "arc 1 a 3 0.27999999999999997\n"
        "arc 1 c 3 0.12\n"
        "arc 2 b 4 0.20000000000000001\n"
        "arc 3 $ 1 1\n"
        "arc 4 $ 2 1\n"
        "fail 1 0 1.5\n"
        "fail 2 0 1\n"
        "B 0 1 2\n");

  // every state is useful; the generic product is larger for this fixture
  CHECK(all_true(coaccessible_states(w.machine)));
  ComposeResult generic = compose(star(n), f1);
  CHECK(w.machine.num_states() < generic.machine.num_states());

  check_same_behaviour(w.machine, generic.machine, 8, kTol);
  CompositionCheck check = verify_composition(star(n), f1, w.machine, 6, kTol);
  CHECK(check.pass);
  CHECK(check.mismatches.empty());

  Symbol a = w.machine.base.isyms.find("a");
  Symbol b = w.machine.base.isyms.find("b");
  Symbol dollar = SymbolTable::kDollar;
  std::optional<double> got =
      output_of_failure(w.machine, {a, dollar, b, dollar});
  REQUIRE(got);
  // a$ consumes the x bigram arc, b$ backs off before the y arc
  CHECK(*got == doctest::Approx(0.7 * 0.6 * (1.5 * 0.3) * 0.2).epsilon(1e-12));
}

TEST_CASE("specialized composition builds no dead states") {
  StarReadyTransducer n = normalize_for_star(fixture_v_split());
  FailureTransducer<double> fx = fixture_f_x();
  SpecializedMachine w = compose_specialized(n, fx);

  REQUIRE(w.machine.num_states() == 2);
  std::vector<std::pair<StateId, StateId>> pairs{{0, 0}, {1, 0}};
  CHECK(w.state_pairs == pairs);
  CHECK(all_true(coaccessible_states(w.machine)));

  const Arc<double>* arc = w.machine.base.find_arc(0, n.machine.isyms.find("a"));
  REQUIRE(arc != nullptr);
  CHECK(arc->dst == 1);
  CHECK(arc->out == 1.0 * 0.5);
  CHECK(w.machine.base.find_arc(0, n.machine.isyms.find("b")) == nullptr);

  // the generic product carries the dead pair entered through the b arc
  ComposeResult generic = compose(star(n), fx);
  CHECK(generic.machine.num_states() == 3);
  CHECK_FALSE(all_true(coaccessible_states(generic.machine)));
  check_same_behaviour(w.machine, generic.machine, 8, kTol);
}

TEST_CASE("a crossing onto an arcless state keeps its back-off chain") {
  // right machine: state 1 has no explicit arcs and backs off through the
  // equally arcless state 2 before reaching the initial state
  FailureTransducer<double> f;
  f.base.isyms.declare("x");
  f.base.isyms.declare("y");
  for (int i = 0; i < 3; ++i) f.add_state();
  f.base.initial = 0;
  f.base.add_arc(0, f.base.isyms.find("x"), 1, 0.5);
  f.base.set_final(0, 0.1);
  f.base.set_final(1, 0.4);
  f.base.set_final(2, 0.8);
  f.set_failure(1, 2, 0.5);
  f.set_failure(2, 0, 0.25);

  StarReadyTransducer n = normalize_for_star(fixture_v());
  SpecializedMachine w = compose_specialized(n, f);

  // the pair over state 2 exists only to carry the back-off chain
  std::vector<std::pair<StateId, StateId>> pairs{{0, 0}, {0, 1}, {1, 1}, {0, 2}};
  CHECK(w.state_pairs == pairs);
  CHECK(w.boundary == std::vector<bool>{true, true, false, true});
  CHECK(w.machine.base.arcs[3].empty());
  CHECK(w.machine.fail_to[1] == 3);
  CHECK(w.machine.fail_out[1] == 0.5);
  CHECK(w.machine.fail_to[3] == 0);
  CHECK(w.machine.fail_out[3] == 0.25);
  REQUIRE(w.machine.base.final_output[3].has_value());
  CHECK(*w.machine.base.final_output[3] == 0.8);

  Symbol a = w.machine.base.isyms.find("a");
  Symbol dollar = SymbolTable::kDollar;
  ComposeResult generic = compose(star(n), f);
  std::optional<double> got =
      output_of_failure(w.machine, {a, dollar, a, dollar});
  std::optional<double> want =
      output_of_failure(generic.machine, {a, dollar, a, dollar});
  REQUIRE(got);
  REQUIRE(want);
  CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
  check_same_behaviour(w.machine, generic.machine, 6, kTol);
  CHECK(all_true(coaccessible_states(w.machine)));
}

TEST_CASE("specialized and generic composition agree on random pipelines") {
  std::mt19937 g(73201);
  for (int round = 0; round < 12; ++round) {
    std::vector<std::string> omega =
        round % 2 ? std::vector<std::string>{"x", "y", "z"}
                  : std::vector<std::string>{"x", "y"};
    Transducer<PairOutput> v = random_trie_v(g, omega, round % 3 == 0);
    FailureTransducer<double> f = random_monotonic_stochastic(g);
    StarReadyTransducer n = normalize_for_star(v);

    CAPTURE(round);
    SpecializedMachine w = compose_specialized(n, f);
    ComposeResult generic = compose(star(n), f);
    // no dead states, and never more states than the unpruned product (the
    // accessible part alone can be smaller: some co-accessible pairs are
    // unreachable)
    CHECK(all_true(coaccessible_states(w.machine)));
    ComposeResult product = compose(star(n), f, false);
    CHECK(w.machine.num_states() <= product.machine.num_states());
    check_same_behaviour(w.machine, generic.machine, 6, kTol);
  }
}

TEST_CASE("precondition checks on the specialized composition") {
  StarReadyTransducer n = normalize_for_star(fixture_v());

  SUBCASE("right machine must be monotonic") {
    FailureTransducer<double> f;
    f.base.isyms.declare("x");
    f.base.isyms.declare("y");
    f.add_state();
    f.add_state();
    f.base.initial = 0;
    f.base.add_arc(0, f.base.isyms.find("x"), 1, 0.5);
    f.base.add_arc(1, f.base.isyms.find("y"), 1, 0.5);
    f.base.set_final(0, 0.5);
    f.base.set_final(1, 0.5);
    f.set_failure(1, 0, 1.0);  // 1 has y, 0 does not
    CHECK_THROWS_WITH_AS(compose_specialized(n, f),
                         doctest::Contains("not monotonic"), Error);
  }
  SUBCASE("right machine must have an acyclic failure graph") {
    FailureTransducer<double> f;
    f.base.isyms.declare("x");
    f.add_state();
    f.add_state();
    f.base.initial = 0;
    f.base.set_final(0, 0.5);
    f.base.set_final(1, 0.5);
    f.set_failure(0, 1, 1.0);
    f.set_failure(1, 0, 1.0);
    CHECK_THROWS_WITH_AS(compose_specialized(n, f),
                         doctest::Contains("cycle"), Error);
  }
  SUBCASE("right machine must be co-accessible") {
    FailureTransducer<double> f;
    f.base.isyms.declare("x");
    f.add_state();
    f.add_state();
    f.base.initial = 0;
    f.base.add_arc(0, f.base.isyms.find("x"), 1, 0.5);
    f.base.set_final(0, 0.5);  // state 1 is a dead end
    CHECK_THROWS_WITH_AS(compose_specialized(n, f),
                         doctest::Contains("not co-accessible"), Error);
  }
  SUBCASE("left machine must be in star-normal form") {
    StarReadyTransducer broken = n;
    broken.machine.add_state();  // orphan
    try {
      compose_specialized(broken, fixture_f1());
      FAIL("compose_specialized accepted a non-normalized left machine");
    } catch (const Error& e) {
      CHECK(e.code() == "invariant-violation");
    }
  }
}
