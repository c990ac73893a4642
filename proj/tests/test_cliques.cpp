#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "relkit/catalog.hpp"
#include "relkit/cliques.hpp"
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

bool same_upword(const UpWord& x, const UpWord& y) {
  auto n = normalize_upwords({x, y});
  return n[0].prefix == n[1].prefix && n[0].period == n[1].period;
}

// Nondeterministic reachability of a pair-NBA on a fixed word pair, with a
// flag for "run visited an accepting state" (endpoints included).
using PairWord = std::vector<std::pair<Sym, Sym>>;

std::pair<std::set<int>, std::set<int>> reach_sets(const Nba& a, int src,
                                                   const PairWord& w) {
  std::set<std::pair<int, int>> cur{{src, a.accepting[src] ? 1 : 0}};
  for (auto [x, y] : w) {
    std::set<std::pair<int, int>> nxt;
    for (auto [q, f] : cur)
      for (const auto& t : a.transitions)
        if (t.src == q && t.letter[0] == x && t.letter[1] == y)
          nxt.insert({t.dst, f | (a.accepting[t.dst] ? 1 : 0)});
    cur = std::move(nxt);
  }
  std::set<int> plain, final;
  for (auto [q, f] : cur) {
    plain.insert(q);
    if (f) final.insert(q);
  }
  return {plain, final};
}

PairWord zip(const Word& x, const Word& y) {
  PairWord w;
  for (std::size_t i = 0; i < x.size(); ++i) w.push_back({x[i], y[i]});
  return w;
}

// Exhaustive pattern search with small word bounds; sound but incomplete, so
// it under-approximates the product-search result.
ThreeCyclesRel brute_three_cycles(const Nba& a, int uy_max, int vwx_max) {
  int n = a.num_states();
  int ss = static_cast<int>(a.sigma.size());
  ThreeCyclesRel r;
  r.rel.assign(n, std::vector<bool>(n, false));
  r.relF.assign(n, std::vector<bool>(n, false));
  auto words_of_len = [&](int len) {
    std::vector<Word> words;
    Word w(len, 0);
    for (;;) {
      words.push_back(w);
      int i = 0;
      while (i < len && ++w[i] == ss) w[i++] = 0;
      if (i == len) break;
    }
    return words;
  };
  std::vector<Word> shorts{{}};  // all words of length <= uy_max
  std::vector<std::vector<Word>> by_len(vwx_max + 1);
  by_len[0] = {{}};
  for (int len = 1; len <= std::max(uy_max, vwx_max); ++len) {
    auto words = words_of_len(len);
    if (len <= vwx_max) by_len[len] = words;
    if (len <= uy_max)
      shorts.insert(shorts.end(), words.begin(), words.end());
  }
  std::map<std::pair<Word, Word>, std::vector<std::pair<std::set<int>,
                                                        std::set<int>>>>
      memo;
  auto reach = [&](int src, const Word& x, const Word& y) {
    auto key = std::make_pair(x, y);
    auto it = memo.find(key);
    if (it == memo.end()) {
      std::vector<std::pair<std::set<int>, std::set<int>>> per(n);
      for (int q = 0; q < n; ++q) per[q] = reach_sets(a, q, zip(x, y));
      it = memo.emplace(key, std::move(per)).first;
    }
    return it->second[src];
  };
  for (int len = 1; len <= vwx_max; ++len)
    for (const Word& v : by_len[len])
      for (const Word& w : by_len[len]) {
        if (v == w) continue;
        for (const Word& x : by_len[len])
          for (int q2 = 0; q2 < n; ++q2) {
            auto [vv, vvF] = reach(q2, v, v);
            if (!vv.count(q2)) continue;
            auto [wv, wvF] = reach(q2, w, v);
            for (int q3 : wv)
              for (int q4 = 0; q4 < n; ++q4) {
                auto [xv, xvF] = reach(q3, x, v);
                if (!xv.count(q3)) continue;
                auto [xw, xwF] = reach(q3, x, w);
                if (!xw.count(q4)) continue;
                auto [xx, xxF] = reach(q4, x, x);
                if (!xx.count(q4)) continue;
                for (int q1 = 0; q1 < n; ++q1) {
                  for (const Word& u : shorts) {
                    auto [uu, uuF] = reach(q1, u, u);
                    if (!uu.count(q2)) continue;
                    for (const Word& y : shorts) {
                      auto [yy, yyF] = reach(q4, y, y);
                      for (int q5 : yy) {
                        r.rel[q1][q5] = true;
                        bool f = uuF.count(q2) || wvF.count(q3) ||
                                 xwF.count(q4) || yyF.count(q5);
                        if (f) r.relF[q1][q5] = true;
                      }
                    }
                  }
                }
              }
          }
      }
  return r;
}

// Two-state pair-NBA accepting exactly the pairs that differ at a position
// in `positions` (an equivalence of finite index 2^|positions|).
Nba window_diff_nba(const std::vector<int>& positions) {
  int m = positions.empty() ? 1 : *std::max_element(positions.begin(),
                                                    positions.end()) +
                                      1;
  Nba b;
  b.width = 2;
  b.sigma = ab();
  for (int i = 0; i <= m; ++i) {
    b.state_names.push_back("p" + std::to_string(i));
    b.accepting.push_back(false);
  }
  int acc = b.num_states();
  b.state_names.push_back("diff");
  b.accepting.push_back(true);
  for (int i = 0; i < m; ++i) {
    bool checked = std::find(positions.begin(), positions.end(), i) !=
                   positions.end();
    for (Sym x = 0; x < 2; ++x)
      for (Sym y = 0; y < 2; ++y) {
        b.transitions.push_back({i, {x, y}, i + 1});
        if (checked && x != y) b.transitions.push_back({i, {x, y}, acc});
      }
  }
  for (Sym x = 0; x < 2; ++x)
    for (Sym y = 0; y < 2; ++y) b.transitions.push_back({acc, {x, y}, acc});
  return b;
}

void check_family_pairwise(const Nba& subject, const CliqueCertificate& cert,
                           int n) {
  auto fam = expand_clique(cert, n);
  REQUIRE(fam.size() == static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i == j) continue;
      CAPTURE(i);
      CAPTURE(j);
      CHECK_FALSE(same_upword(fam[i], fam[j]));
      CHECK(member_upword(subject, {fam[i], fam[j]}));
    }
}

UpWord rand_up(std::mt19937_64& gen, int ss) {
  UpWord w;
  int pl = static_cast<int>(gen() % 3);
  int ql = 1 + static_cast<int>(gen() % 3);
  for (int i = 0; i < pl; ++i) w.prefix.push_back(static_cast<Sym>(gen() % ss));
  for (int i = 0; i < ql; ++i) w.period.push_back(static_cast<Sym>(gen() % ss));
  return w;
}

}  // namespace

TEST_CASE("three_cycles on fixed machines") {
  // Single state, all pair self-loops: pattern exists (v=a, w=b, x=a).
  Nba full;
  full.width = 2;
  full.sigma = ab();
  full.state_names = {"q"};
  full.accepting = {true};
  for (Sym x = 0; x < 2; ++x)
    for (Sym y = 0; y < 2; ++y) full.transitions.push_back({0, {x, y}, 0});
  auto r = three_cycles(full);
  CHECK(r.rel[0][0]);
  CHECK(r.relF[0][0]);

  // Diagonal-only machine: no run ever reads (w,v) with v != w.
  Nba diag;
  diag.width = 2;
  diag.sigma = ab();
  diag.state_names = {"q"};
  diag.accepting = {true};
  for (Sym x = 0; x < 2; ++x) diag.transitions.push_back({0, {x, x}, 0});
  auto rd = three_cycles(diag);
  CHECK_FALSE(rd.rel[0][0]);
}

TEST_CASE("three_cycles agrees with bounded brute-force search") {
  for (int s = 0; s < 20; ++s) {
    Nba a = random_nba(2, 3, 2, 4200 + s);
    auto fast = three_cycles(a);
    auto brute = brute_three_cycles(a, 1, 2);
    for (int p = 0; p < a.num_states(); ++p)
      for (int q = 0; q < a.num_states(); ++q) {
        CAPTURE(s);
        CAPTURE(p);
        CAPTURE(q);
        if (brute.rel[p][q]) CHECK(fast.rel[p][q]);
        if (brute.relF[p][q]) CHECK(fast.relF[p][q]);
        // relF refines rel.
        if (fast.relF[p][q]) CHECK(fast.rel[p][q]);
      }
  }
}

TEST_CASE("three_cycles equals brute-force on catalog machines") {
  for (const Nba& a : {catalog_neq_omega(), catalog_not_ee_omega(),
                       catalog_ee_omega()}) {
    auto fast = three_cycles(a);
    auto brute = brute_three_cycles(a, 2, 2);
    for (int p = 0; p < a.num_states(); ++p)
      for (int q = 0; q < a.num_states(); ++q) {
        CAPTURE(p);
        CAPTURE(q);
        CHECK(fast.rel[p][q] == brute.rel[p][q]);
        CHECK(fast.relF[p][q] == brute.relF[p][q]);
      }
  }
}

TEST_CASE("relF grows monotonically with accepting states") {
  for (int s = 0; s < 10; ++s) {
    Nba a = random_nba(2, 3, 2, 4300 + s);
    Nba more = a;
    more.accepting[s % more.num_states()] = true;
    auto ra = three_cycles(a);
    auto rm = three_cycles(more);
    for (int p = 0; p < a.num_states(); ++p)
      for (int q = 0; q < a.num_states(); ++q)
        if (ra.relF[p][q]) CHECK(rm.relF[p][q]);
  }
}

TEST_CASE("prefix pattern: word inequality has one, equal-ends complement does not") {
  Nba neq = catalog_neq_omega();
  auto cert = detect_prefix_pattern(neq);
  REQUIRE(cert.has_value());
  CHECK(cert->kind == CliqueCertificate::Kind::kPrefix);
  check_family_pairwise(neq, *cert, 4);

  CHECK_FALSE(detect_prefix_pattern(catalog_not_ee_omega()).has_value());

  Nba empty;
  empty.width = 2;
  empty.sigma = ab();
  empty.state_names = {"q"};
  empty.accepting = {false};
  CHECK_FALSE(detect_prefix_pattern(empty).has_value());
  CHECK_FALSE(detect_periodic_pattern(empty).has_value());
}

TEST_CASE("periodic pattern: equal-ends complement has one") {
  Nba nee = catalog_not_ee_omega();
  auto cert = detect_periodic_pattern(nee);
  REQUIRE(cert.has_value());
  CHECK(cert->kind == CliqueCertificate::Kind::kPeriodic);
  for (int n = 1; n <= 5; ++n) check_family_pairwise(nee, *cert, n);
}

TEST_CASE("has_infinite_clique distinguishes finite and infinite index") {
  CHECK(has_infinite_clique(catalog_neq_omega()).has_value());
  CHECK(has_infinite_clique(catalog_not_ee_omega()).has_value());
  // Complements of finite-index equivalences never have one.
  std::vector<std::vector<int>> position_sets{
      {0}, {1}, {0, 1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}, {3}, {0, 3}, {1, 3}};
  for (const auto& ps : position_sets) {
    Nba b = window_diff_nba(ps);
    CHECK_FALSE(check_co_equivalence_sample(b, 77, 50).has_value());
    CHECK_FALSE(has_infinite_clique(b).has_value());
  }
}

TEST_CASE("co_equiv_nba of omega-equality is word inequality") {
  Nba co = co_equiv_nba(catalog_eq_omega(), 0);
  std::mt19937_64 gen(21);
  for (int i = 0; i < 30; ++i) {
    UpWord x = rand_up(gen, 2), y = rand_up(gen, 2);
    CAPTURE(i);
    CHECK(member_upword(co, {x, y}) == !same_upword(x, y));
    CHECK(member_upword(co, {x, y}) == member_upword(co, {y, x}));
  }
  // The full relation separates nothing.
  Dpa full;
  full.width = 2;
  full.sigma = ab();
  full.state_names = {"s"};
  full.priority = {0};
  full.delta = {{0, 0, 0, 0}};
  CHECK(is_empty_nba(co_equiv_nba(full, 0)));
}

TEST_CASE("decide_omega_recognizable on parity inputs") {
  // Equality of omega-words: not a finite union of products.
  auto res = decide_omega_recognizable(catalog_eq_omega());
  CHECK_FALSE(res.recognizable);
  CHECK(res.tape == 0);
  REQUIRE(res.certificate.has_value());
  Nba co = co_equiv_nba(catalog_eq_omega(), 0);
  check_family_pairwise(co, *res.certificate, 3);

  // Product of "infinitely many a" and "eventually only b": recognizable.
  Dpa prod;
  prod.width = 2;
  prod.sigma = ab();
  // states (s1, s2): s1 in {A, B} tracks last letter of x, s2 in {sb, sa}
  // tracks last letter of y. Priority 1 while y emits a; else 2 + (s1 == B).
  prod.state_names = {"A.sb", "A.sa", "B.sb", "B.sa"};
  prod.initial = 2;
  prod.priority = {2, 1, 3, 1};
  prod.delta.assign(4, std::vector<int>(4, 0));
  for (int s = 0; s < 4; ++s)
    for (int li = 0; li < 4; ++li) {
      TupleLetter l = prod.letter_of_index(li);
      int s1 = l[0] == 0 ? 0 : 1;  // a -> A, b -> B
      int s2 = l[1] == 0 ? 1 : 0;  // a -> sa, b -> sb
      prod.delta[s][li] = s1 * 2 + s2;
    }
  CHECK(decide_omega_recognizable(prod).recognizable);

  // Equal ends as a parity automaton: finitely many mismatches.
  Dpa ee;
  ee.width = 2;
  ee.sigma = ab();
  ee.state_names = {"match", "mismatch"};
  ee.priority = {2, 1};
  ee.delta.assign(2, std::vector<int>(4, 0));
  for (int s = 0; s < 2; ++s)
    for (int li = 0; li < 4; ++li) {
      TupleLetter l = ee.letter_of_index(li);
      ee.delta[s][li] = l[0] == l[1] ? 0 : 1;
    }
  auto ree = decide_omega_recognizable(ee);
  CHECK_FALSE(ree.recognizable);
  REQUIRE(ree.certificate.has_value());
  check_family_pairwise(co_equiv_nba(ee, 0), *ree.certificate, 3);
}

TEST_CASE("decide_omega_recognizable on Buchi inputs") {
  // Same verdicts via the Buchi complementation path.
  Nba eqn = dpa_to_nba(catalog_eq_omega());
  auto res = decide_omega_recognizable(eqn, 2 * eqn.num_states());
  CHECK_FALSE(res.recognizable);
}
