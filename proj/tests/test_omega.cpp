#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "relkit/catalog.hpp"
#include "relkit/omega.hpp"
#include "relkit/oracles.hpp"

using namespace relkit;

namespace {

Alphabet ab() {
  Alphabet s;
  s.add("a");
  s.add("b");
  return s;
}

UpWord random_upword(std::mt19937_64& gen, int sigma_size) {
  UpWord w;
  int pl = static_cast<int>(gen() % 4);
  int ql = 1 + static_cast<int>(gen() % 3);
  for (int i = 0; i < pl; ++i)
    w.prefix.push_back(static_cast<Sym>(gen() % sigma_size));
  for (int i = 0; i < ql; ++i)
    w.period.push_back(static_cast<Sym>(gen() % sigma_size));
  return w;
}

std::vector<UpWord> random_tuple(std::mt19937_64& gen, int width,
                                 int sigma_size) {
  std::vector<UpWord> t;
  for (int i = 0; i < width; ++i) t.push_back(random_upword(gen, sigma_size));
  return t;
}

// Single-track DPA over {a,b}: priority 0 on the state reached by "a",
// priority 1 on the one reached by "b" -- accepts words with infinitely
// many a.
Dpa inf_many_a_dpa() {
  Dpa d;
  d.width = 1;
  d.sigma = ab();
  d.state_names = {"sawA", "sawB"};
  d.initial = 1;
  d.priority = {0, 1};
  d.delta = {{0, 1}, {0, 1}};
  return d;
}

Dpa universal_dpa() {
  Dpa d;
  d.width = 1;
  d.sigma = ab();
  d.state_names = {"s"};
  d.priority = {0};
  d.delta = {{0, 0}};
  return d;
}

// Single-track NBA over {a,b} accepting words with infinitely many a.
Nba inf_many_a_nba() {
  Nba b;
  b.width = 1;
  b.sigma = ab();
  b.state_names = {"w", "hit"};
  b.accepting = {false, true};
  b.transitions = {{0, {0}, 1}, {0, {1}, 0}, {1, {0}, 1}, {1, {1}, 0}};
  return b;
}

Nba universal_nba() {
  Nba b;
  b.width = 1;
  b.sigma = ab();
  b.state_names = {"s"};
  b.accepting = {true};
  b.transitions = {{0, {0}, 0}, {0, {1}, 0}};
  return b;
}

}  // namespace

TEST_CASE("complement_dpa flips acceptance pointwise") {
  Dpa d = inf_many_a_dpa();
  Dpa c = complement_dpa(d);
  Dpa cc = complement_dpa(c);
  std::mt19937_64 gen(11);
  for (int i = 0; i < 20; ++i) {
    auto w = random_tuple(gen, 1, 2);
    CHECK(member_upword(d, w) != member_upword(c, w));
    CHECK(member_upword(d, w) == member_upword(cc, w));
  }
  // Universal flips to empty.
  Dpa e = complement_dpa(universal_dpa());
  std::vector<UpWord> aw{{{}, {0}}};
  CHECK_FALSE(member_upword(e, aw));
}

TEST_CASE("dpa_to_nba preserves the language") {
  std::mt19937_64 gen(12);
  for (Dpa d : {inf_many_a_dpa(), universal_dpa(), catalog_eq_omega(),
                complement_dpa(inf_many_a_dpa())}) {
    Nba b = dpa_to_nba(d);
    for (int i = 0; i < 50; ++i) {
      auto w = random_tuple(gen, d.width, 2);
      CAPTURE(i);
      CHECK(member_upword(d, w) == member_upword(b, w));
    }
  }
  // Empty DPA converts to an empty NBA.
  CHECK(is_empty_nba(dpa_to_nba(complement_dpa(universal_dpa()))));
  CHECK_FALSE(is_empty_nba(dpa_to_nba(universal_dpa())));
}

TEST_CASE("complement_nba on fixed machines") {
  // Empty NBA complements to a universal one.
  Nba empty;
  empty.width = 1;
  empty.sigma = ab();
  empty.state_names = {"s"};
  empty.accepting = {false};
  empty.transitions = {{0, {0}, 0}, {0, {1}, 0}};
  Nba cu = complement_nba(empty, 2 * empty.num_states());
  std::mt19937_64 gen(13);
  for (int i = 0; i < 20; ++i)
    CHECK(member_upword(cu, random_tuple(gen, 1, 2)));

  Nba inf_a = inf_many_a_nba();
  Nba co = complement_nba(inf_a, 2 * inf_a.num_states());
  std::vector<UpWord> abw{{{}, {0, 1}}};  // (ab)^w: infinitely many a
  std::vector<UpWord> bw{{{}, {1}}};      // b^w
  CHECK_FALSE(member_upword(co, abw));
  CHECK(member_upword(co, bw));
}

TEST_CASE("complement_nba partitions upwords on random machines") {
  for (int s = 0; s < 20; ++s) {
    Nba b = random_nba(1, 3, 2, 9000 + s);
    Nba c = complement_nba(b, 2 * b.num_states());
    std::mt19937_64 gen(500 + s);
    for (int i = 0; i < 30; ++i) {
      auto w = random_tuple(gen, 1, 2);
      CAPTURE(s);
      CAPTURE(i);
      CHECK(member_upword(b, w) != member_upword(c, w));
    }
  }
}

TEST_CASE("complement_nba validates rank_cap and honors the state budget") {
  Nba b = inf_many_a_nba();
  CHECK_THROWS_AS(complement_nba(b, 1), InputError);
  CHECK_THROWS_AS(complement_nba(b, 2 * b.num_states(), 2), BudgetError);
}

TEST_CASE("product_nba computes intersections") {
  Nba uni = universal_nba();
  Nba inf_a = inf_many_a_nba();
  std::mt19937_64 gen(14);
  for (int i = 0; i < 20; ++i) {
    auto w = random_tuple(gen, 1, 2);
    CHECK(member_upword(product_nba(inf_a, uni), w) ==
          member_upword(inf_a, w));
  }
  CHECK(is_empty_nba(trim(product_nba(
      inf_a, complement_nba(inf_a, 2 * inf_a.num_states())))));
  for (int s = 0; s < 2; ++s) {
    Nba b1 = random_nba(1, 3, 2, 7100 + s);
    Nba b2 = random_nba(1, 3, 2, 7200 + s);
    Nba p = product_nba(b1, b2);
    for (int i = 0; i < 30; ++i) {
      auto w = random_tuple(gen, 1, 2);
      CHECK(member_upword(p, w) ==
            (member_upword(b1, w) && member_upword(b2, w)));
    }
  }
}

TEST_CASE("is_empty_nba on catalog machines") {
  CHECK_FALSE(is_empty_nba(catalog_neq_omega()));
  CHECK_FALSE(is_empty_nba(catalog_ee_omega()));
  CHECK_FALSE(is_empty_nba(catalog_not_ee_omega()));
}
