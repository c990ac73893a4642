#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relkit/io.hpp"

using namespace relkit;

namespace {

const char* kEqFile = R"(# equality of two words
ktape k=2 det=1 alphabet=a,b
state A tape=1 initial
state Ba tape=2
state Bb tape=2
state E1 tape=2
state F tape=1 final
trans A a Ba
trans A b Bb
trans A END E1
trans Ba a A
trans Bb b A
trans E1 END F
)";

}  // namespace

TEST_CASE("deterministic ktape parses with implicit sink") {
  AnyAutomaton any = parse_automaton(kEqFile);
  const Mdfa& m = std::get<Mdfa>(any);
  CHECK(validate(m).empty());
  CHECK(m.num_states() == 6);  // dead state added
  CHECK(m.state_names.back() == "dead");
  Alphabet s = m.sigma;
  CHECK(member_det(m, {{0, 1}, {0, 1}}));
  CHECK_FALSE(member_det(m, {{0}, {1}}));
}

TEST_CASE("print/parse round trip is stable") {
  AnyAutomaton any = parse_automaton(kEqFile);
  std::string once = print_automaton(any);
  std::string twice = print_automaton(parse_automaton(once));
  CHECK(once == twice);
}

TEST_CASE("nondeterministic ktape with word labels") {
  AnyAutomaton any = parse_automaton(
      "ktape k=2 det=0 alphabet=a,b\n"
      "state i initial\n"
      "state f final\n"
      "trans i (ab,) f\n"
      "trans f (,ba) f\n");
  const KTapeAutomaton& a = std::get<KTapeAutomaton>(any);
  CHECK(validate(a).empty());
  CHECK(member_nondet(a, {{0, 1}, {}}));
  CHECK(member_nondet(a, {{0, 1}, {1, 0, 1, 0}}));
  CHECK_FALSE(member_nondet(a, {{0, 1}, {0}}));
  CHECK(print_automaton(parse_automaton(print_automaton(any))) == print_automaton(any));
}

TEST_CASE("nba and dpa round trip") {
  AnyAutomaton nba = parse_automaton(
      "nba m=2 alphabet=a,b\n"
      "state s initial final\n"
      "trans s (a,b) s\n");
  CHECK(std::get<Nba>(nba).width == 2);
  CHECK(print_automaton(parse_automaton(print_automaton(nba))) == print_automaton(nba));

  AnyAutomaton dpa = parse_automaton(
      "dpa m=1 alphabet=a,b\n"
      "state p initial\n"
      "state q\n"
      "prio p 0\n"
      "prio q 1\n"
      "trans p (a) p\n"
      "trans p (b) q\n"
      "trans q (a) p\n"
      "trans q (b) q\n");
  CHECK(validate(std::get<Dpa>(dpa)).empty());
  CHECK(print_automaton(parse_automaton(print_automaton(dpa))) == print_automaton(dpa));
}

TEST_CASE("independent automaton round trip") {
  AnyAutomaton any = parse_automaton(
      "indep k=2 alphabet=a,b\n"
      "component 1\n"
      "state x initial\n"
      "trans x a x\n"
      "trans x b x\n"
      "component 2\n"
      "state y initial\n"
      "state z\n"
      "trans y a z\n"
      "trans y b y\n"
      "trans z a y\n"
      "trans z b z\n"
      "finaltuple x y\n");
  const IndependentKTape& a = std::get<IndependentKTape>(any);
  CHECK(validate(a).empty());
  CHECK(member_independent(a, {{0, 1}, {0, 0}}));
  CHECK_FALSE(member_independent(a, {{}, {0}}));
  CHECK(print_automaton(parse_automaton(print_automaton(any))) == print_automaton(any));
}

TEST_CASE("strict errors carry line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_automaton(text);
      FAIL("expected InputError for: " << text);
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("ktape k=2 det=1 alphabet=a,b\nstate A tape=1 initial\nstate A tape=1\n",
               "line 3: duplicate state");
  expect_error("ktape k=2 det=1 alphabet=a,b\nfoo bar\n", "unknown keyword");
  expect_error("ktape k=2 det=1 alphabet=a,END\n", "line 1");
  expect_error("ktape k=2 det=1 alphabet=a,b\n", "exactly one initial");
  expect_error("nba m=2 alphabet=a,b\nstate s initial\ntrans s (a) s\n", "2 components");
}

TEST_CASE("greedy word parsing with multicharacter letters") {
  Alphabet s;
  s.add("a");
  s.add("ab");
  s.add("b");
  CHECK(parse_word(s, "aab") == Word{0, 1});      // greedy: a, ab
  CHECK(parse_word(s, "a.a.b") == Word{0, 0, 2});  // explicit separators
  CHECK(parse_word(s, "") == Word{});
  CHECK_THROWS_AS(parse_word(s, "ac"), InputError);
}
