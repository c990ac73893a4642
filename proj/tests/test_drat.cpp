#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relkit/catalog.hpp"
#include "relkit/drat.hpp"
#include "relkit/equiv.hpp"
#include "relkit/oracles.hpp"

using namespace relkit;

namespace {

Word w(const Alphabet& s, const std::string& chars) {
  Word out;
  for (char c : chars) out.push_back(s.at(std::string(1, c)));
  return out;
}

std::vector<bool> reach_of(const PlainDet& p) {
  std::vector<bool> seen(p.num_states(), false);
  std::vector<int> bfs{p.initial};
  seen[p.initial] = true;
  while (!bfs.empty()) {
    int q = bfs.back();
    bfs.pop_back();
    for (int d : p.delta[q])
      if (!seen[d]) {
        seen[d] = true;
        bfs.push_back(d);
      }
  }
  return seen;
}

// Null transparency straight from the definition, by simulating the
// front-only run of every front-tape state.
bool brute_nt(const Mdfa& a, const Word& v1) {
  if (v1.empty()) return false;
  auto run = [&](int s) -> int {
    int cur = s;
    for (Sym c : v1) {
      if (a.tape_of[cur] != 0) return -1;
      cur = a.delta[cur][c];
    }
    return cur;
  };
  for (int s = 0; s < a.num_states(); ++s) {
    if (a.tape_of[s] != 0) continue;
    int t = run(s);
    if (t < 0 || a.tape_of[t] != 0) continue;
    if (run(t) != t) return false;
  }
  return true;
}

// --- independent evaluation of the two-tape encoding ------------------------

struct ShuffleTuple {
  int q = 0, r = 0;
  Word v1, w1, y;
  std::vector<Word> gs, hs;  // g_0..g_n, h_0..h_n
};

std::optional<ShuffleTuple> parse_shuffle_tuple(const ShuffleEncoding& e, int g,
                                                const WordTuple& u) {
  const int m = static_cast<int>(e.state_letter.size());
  auto st = [&](Sym c) { return (c >= g && c < g + m) ? c - g : -1; };
  auto pl = [&](Sym c) { return c >= 0 && c < g; };
  if (u.size() != 2) return std::nullopt;
  ShuffleTuple out;
  const Word& t0 = u[0];
  if (t0.size() < 2 || st(t0[0]) < 0 || st(t0[1]) < 0) return std::nullopt;
  out.q = st(t0[0]);
  out.r = st(t0[1]);
  for (size_t i = 2; i < t0.size(); ++i) {
    if (!pl(t0[i])) return std::nullopt;
    out.w1.push_back(t0[i]);
  }
  const Word& t1 = u[1];
  size_t i = 0;
  auto block = [&]() {
    Word b;
    while (i < t1.size() && pl(t1[i])) b.push_back(t1[i++]);
    return b;
  };
  out.gs.push_back(block());
  if (i >= t1.size() || t1[i] != e.dia) return std::nullopt;
  ++i;
  out.hs.push_back(block());
  for (;;) {
    if (i >= t1.size()) return std::nullopt;
    if (t1[i] == e.mark) {
      ++i;
      break;
    }
    if (t1[i] != e.dia) return std::nullopt;
    ++i;
    if (i >= t1.size() || !pl(t1[i])) return std::nullopt;
    out.v1.push_back(t1[i++]);
    out.gs.push_back(block());
    if (i >= t1.size() || t1[i] != e.dia) return std::nullopt;
    ++i;
    out.hs.push_back(block());
  }
  for (; i < t1.size(); ++i) {
    if (!pl(t1[i])) return std::nullopt;
    out.y.push_back(t1[i]);
  }
  if (out.v1.empty()) return std::nullopt;
  return out;
}

bool eval_shuffle_condition(const PlainDet& p, const std::vector<bool>& reach,
                            const ShuffleTuple& s, bool first) {
  if (!reach[s.q]) return false;
  const int n = static_cast<int>(s.v1.size());
  auto run_blocks = [&](int start, const std::vector<Word>& blocks) -> int {
    int cur = start;
    for (int i = 0; i <= n; ++i) {
      for (Sym c : blocks[i]) {
        if (p.tape_of[cur] != 1) return -1;
        cur = p.delta[cur][c];
      }
      if (i < n) {
        if (p.tape_of[cur] != 0) return -1;
        cur = p.delta[cur][s.v1[i]];
      }
    }
    return cur;
  };
  if (run_blocks(s.q, s.gs) != s.q) return false;
  if (run_blocks(s.q, s.hs) != s.r) return false;
  int s3 = s.r;
  for (Sym c : s.v1) {
    if (p.tape_of[s3] != 0) return false;
    s3 = p.delta[s3][c];
  }
  if (s3 != s.r) return false;
  Word x;
  for (const Word& h : s.hs) x.insert(x.end(), h.begin(), h.end());
  if (first) {
    Word xy = x;
    xy.insert(xy.end(), s.y.begin(), s.y.end());
    return member_plain_from(p, s.q, {s.w1, xy});
  }
  return member_plain_from(p, s.r, {s.w1, s.y});
}

WordTuple assemble_shuffle(const ShuffleEncoding& e, const ShuffleTuple& s) {
  WordTuple u(2);
  u[0].push_back(e.state_letter[s.q]);
  u[0].push_back(e.state_letter[s.r]);
  u[0].insert(u[0].end(), s.w1.begin(), s.w1.end());
  Word& t1 = u[1];
  t1.insert(t1.end(), s.gs[0].begin(), s.gs[0].end());
  t1.push_back(e.dia);
  t1.insert(t1.end(), s.hs[0].begin(), s.hs[0].end());
  for (size_t i = 0; i < s.v1.size(); ++i) {
    t1.push_back(e.dia);
    t1.push_back(s.v1[i]);
    t1.insert(t1.end(), s.gs[i + 1].begin(), s.gs[i + 1].end());
    t1.push_back(e.dia);
    t1.insert(t1.end(), s.hs[i + 1].begin(), s.hs[i + 1].end());
  }
  t1.push_back(e.mark);
  t1.insert(t1.end(), s.y.begin(), s.y.end());
  return u;
}

Word random_word(std::mt19937_64& rng, int g, int maxlen) {
  Word out;
  int len = static_cast<int>(rng() % (maxlen + 1));
  for (int i = 0; i < len; ++i) out.push_back(static_cast<Sym>(rng() % g));
  return out;
}

// --- independent evaluation of the k-ary encoding ----------------------------

struct KaryTuple {
  int q = 0;
  std::vector<int> states;  // s_0 .. s_n
  Word letters;             // c_1 .. c_n
  Word w1;
};

std::optional<KaryTuple> parse_kary_front(const KaryEncoding& e, int g, const Word& t0) {
  const int m = static_cast<int>(e.state_letter.size());
  auto st = [&](Sym c) { return (c >= g && c < g + m) ? c - g : -1; };
  auto pl = [&](Sym c) { return c >= 0 && c < g; };
  KaryTuple out;
  size_t i = 0;
  if (i >= t0.size() || st(t0[i]) < 0) return std::nullopt;
  out.q = st(t0[i++]);
  if (i >= t0.size() || st(t0[i]) < 0) return std::nullopt;
  out.states.push_back(st(t0[i++]));
  for (;;) {
    if (i >= t0.size()) return std::nullopt;
    if (t0[i] == e.mark) {
      ++i;
      break;
    }
    if (!pl(t0[i])) return std::nullopt;
    out.letters.push_back(t0[i++]);
    if (i >= t0.size() || st(t0[i]) < 0) return std::nullopt;
    out.states.push_back(st(t0[i++]));
  }
  for (; i < t0.size(); ++i) {
    if (!pl(t0[i])) return std::nullopt;
    out.w1.push_back(t0[i]);
  }
  return out;
}

bool eval_kary_condition(const Mdfa& view, const PlainDet& p, const std::vector<bool>& reach,
                         const KaryEncoding& e, const WordTuple& u, bool second) {
  auto parsed = parse_kary_front(e, p.gamma.size(), u[0]);
  if (!parsed) return false;
  if (!reach[parsed->q] || parsed->states[0] != parsed->q) return false;
  Word v1;
  int cur = parsed->q;
  const int nsig = view.sigma.size();
  for (size_t i = 0; i < parsed->letters.size(); ++i) {
    Sym c = parsed->letters[i];
    if (p.tape_of[cur] == 0) {
      if (c >= nsig) return false;
      v1.push_back(c);
    }
    cur = p.delta[cur][c];
    if (parsed->states[i + 1] != cur) return false;
  }
  if (cur != parsed->q) return false;
  if (!brute_nt(view, v1)) return false;
  WordTuple sim(u.size());
  sim[0] = second ? v1 : Word{};
  sim[0].insert(sim[0].end(), parsed->w1.begin(), parsed->w1.end());
  for (size_t t = 1; t < u.size(); ++t) sim[t] = u[t];
  return member_plain_from(p, parsed->q, sim);
}

// Deterministic k-tape automaton accepting every tuple: one state per tape
// plus an accepting sink.
Mdfa full_relation(int k, const Alphabet& sigma) {
  Mdfa a;
  a.arity = k;
  a.sigma = sigma;
  for (int t = 0; t <= k; ++t) {
    a.state_names.push_back("t" + std::to_string(t));
    a.tape_of.push_back(t < k ? t : 0);
    a.finals.push_back(t == k);
    a.delta.emplace_back(sigma.size(), t);
    a.delta_end.push_back(t + 1 <= k ? t + 1 : k);
  }
  a.initial = 0;
  return a;
}

Alphabet ab() {
  Alphabet s;
  s.add("a");
  s.add("b");
  return s;
}

// Front word of some path from the initial state of p to q (other-tape
// letters dropped); nullopt when q is unreachable.
std::optional<Word> front_access(const PlainDet& p, int q) {
  std::vector<int> par(p.num_states(), -2);
  std::vector<Sym> via(p.num_states(), -1);
  std::vector<int> bfs{p.initial};
  par[p.initial] = -1;
  for (size_t i = 0; i < bfs.size(); ++i) {
    int s = bfs[i];
    for (int c = 0; c < p.gamma.size(); ++c) {
      int d = p.delta[s][c];
      if (par[d] != -2) continue;
      par[d] = s;
      via[d] = c;
      bfs.push_back(d);
    }
  }
  if (par[q] == -2) return std::nullopt;
  Word out;
  for (int at = q; par[at] >= 0; at = par[at])
    if (p.tape_of[par[at]] == 0) out.push_back(via[at]);
  std::reverse(out.begin(), out.end());
  return out;
}

// Strips the optional trailing end mark; nullopt if an end mark appears
// anywhere else.
std::optional<Word> to_plain_sigma(const Word& u, Sym emark) {
  Word out;
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i] == emark) {
      if (i + 1 != u.size()) return std::nullopt;
      return out;
    }
    out.push_back(u[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("null-transparent word DFA: empty word, brute agreement, idempotence") {
  std::vector<Mdfa> machines{catalog_len2(), catalog_eq(), catalog_subseq(),
                             random_mdfa(2, 4, 2, 11), random_mdfa(2, 5, 2, 12)};
  for (const Mdfa& a : machines) {
    for (int j = 0; j < a.arity; ++j) {
      Mdfa view = drat_view(a, j);
      Dfa d = null_transparent_dfa(view);
      CHECK(!member_dfa(d, {}));
      for (const WordTuple& t : enumerate_tuples(1, view.sigma, 3))
        CHECK(member_dfa(d, t[0]) == brute_nt(view, t[0]));
      for (const WordTuple& t : enumerate_tuples(1, view.sigma, 4)) {
        if (!member_dfa(d, t[0])) continue;
        Word twice = t[0];
        twice.insert(twice.end(), t[0].begin(), t[0].end());
        CHECK(member_dfa(d, twice));
      }
    }
  }
}

TEST_CASE("two-tape encoding agrees with a direct evaluation of its condition") {
  std::mt19937_64 rng(20250817);
  std::vector<Mdfa> machines{catalog_eq(), catalog_len2(), catalog_subseq()};
  for (const Mdfa& a : machines) {
    PlainDet p = make_plain(a);
    std::vector<bool> reach = reach_of(p);
    ShuffleEncoding enc = shuffle_encode(a);
    const int g = p.gamma.size();
    const int m = p.num_states();
    int done = 0;
    while (done < 200) {
      ShuffleTuple s;
      s.q = static_cast<int>(rng() % m);
      s.r = static_cast<int>(rng() % m);
      int n = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < n; ++i) s.v1.push_back(static_cast<Sym>(rng() % g));
      for (int i = 0; i <= n; ++i) {
        s.gs.push_back(random_word(rng, g, 2));
        s.hs.push_back(random_word(rng, g, 2));
      }
      s.w1 = random_word(rng, g, 3);
      s.y = random_word(rng, g, 2);
      WordTuple u = assemble_shuffle(enc, s);
      if (tuple_len(u) > (done < 120 ? 8 : 12)) continue;
      ++done;
      CHECK(member_det(enc.c1, u) == eval_shuffle_condition(p, reach, s, true));
      CHECK(member_det(enc.c2, u) == eval_shuffle_condition(p, reach, s, false));
    }
    // arbitrary tuples, mostly malformed: the machine and the evaluator must
    // still agree (unparseable means rejected)
    for (int it = 0; it < 300; ++it) {
      WordTuple u{random_word(rng, enc.letters.size(), 6),
                  random_word(rng, enc.letters.size(), 6)};
      auto parsed = parse_shuffle_tuple(enc, g, u);
      bool want1 = parsed && eval_shuffle_condition(p, reach, *parsed, true);
      bool want2 = parsed && eval_shuffle_condition(p, reach, *parsed, false);
      CHECK(member_det(enc.c1, u) == want1);
      CHECK(member_det(enc.c2, u) == want2);
    }
  }
}

TEST_CASE("two-tape encoding rejects a broken separator rhythm") {
  Mdfa a = catalog_eq();
  PlainDet p = make_plain(a);
  ShuffleEncoding enc = shuffle_encode(a);
  ShuffleTuple s;
  s.q = p.initial;
  s.r = p.initial;
  s.v1 = {0};
  s.gs = {{}, {}};
  s.hs = {{}, {}};
  WordTuple u = assemble_shuffle(enc, s);
  // drop the first dia
  u[1].erase(u[1].begin());
  CHECK(!member_det(enc.c1, u));
  CHECK(!member_det(enc.c2, u));
}

TEST_CASE("two-tape encodings are equivalent for a recognizable relation") {
  ShuffleEncoding enc = shuffle_encode(catalog_len2());
  EquivResult er = bounded_equiv(enc.c1, enc.c2, 8, 4'000'000);
  CHECK(er.equal);
}

TEST_CASE("k-ary encoding agrees with a direct evaluation of its condition") {
  std::mt19937_64 rng(20250818);
  std::vector<Mdfa> machines{catalog_eq(), random_mdfa(3, 3, 2, 21), random_mdfa(3, 4, 2, 22)};
  for (const Mdfa& a : machines) {
    PlainDet p = make_plain(a);
    std::vector<bool> reach = reach_of(p);
    KaryEncoding enc = kary_encode(a);
    const int g = p.gamma.size();
    const int m = p.num_states();
    int done = 0;
    int attempts = 0;
    while (done < 200 && ++attempts < 20000) {
      // random walk in p, looking for a short cycle to spell out
      int q = static_cast<int>(rng() % m);
      int cur = q;
      KaryTuple s;
      s.q = q;
      s.states.push_back(q);
      int steps = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < steps; ++i) {
        Sym c = static_cast<Sym>(rng() % g);
        s.letters.push_back(c);
        cur = p.delta[cur][c];
        s.states.push_back(cur);
      }
      if (cur != q && rng() % 4 != 0) continue;  // keep some non-cycles too
      s.w1 = random_word(rng, g, 2);
      WordTuple u(a.arity);
      u[0].push_back(enc.state_letter[s.q]);
      for (size_t i = 0; i < s.states.size(); ++i) {
        u[0].push_back(enc.state_letter[s.states[i]]);
        if (i < s.letters.size()) u[0].push_back(s.letters[i]);
      }
      u[0].push_back(enc.mark);
      u[0].insert(u[0].end(), s.w1.begin(), s.w1.end());
      for (int t = 1; t < a.arity; ++t) u[t] = random_word(rng, g, 2);
      if (rng() % 8 == 0 && !u[0].empty()) u[0][rng() % u[0].size()] = static_cast<Sym>(rng() % enc.letters.size());
      if (tuple_len(u) > 14) continue;
      ++done;
      CHECK(member_det(enc.p1, u) == eval_kary_condition(a, p, reach, enc, u, false));
      CHECK(member_det(enc.p2, u) == eval_kary_condition(a, p, reach, enc, u, true));
    }
    CHECK(done == 200);
  }
}

TEST_CASE("k-ary encoding rejects a spelled run that is not a cycle") {
  Mdfa a = catalog_eq();
  PlainDet p = make_plain(a);
  KaryEncoding enc = kary_encode(a);
  // find a state with delta to a different state
  int q = -1, c = -1;
  for (int s = 0; s < p.num_states() && q < 0; ++s)
    for (int ch = 0; ch < p.gamma.size() && q < 0; ++ch)
      if (p.delta[s][ch] != s) {
        q = s;
        c = ch;
      }
  REQUIRE(q >= 0);
  WordTuple u(2);
  u[0] = {enc.state_letter[q], enc.state_letter[q], static_cast<Sym>(c),
          enc.state_letter[p.delta[q][c]], enc.mark};
  CHECK(!member_det(enc.p1, u));
  CHECK(!member_det(enc.p2, u));
}

TEST_CASE("k-ary encodings are equivalent for the full relation") {
  Mdfa a = full_relation(3, ab());
  KaryEncoding enc = kary_encode(a);
  EquivResult er = bounded_equiv(enc.p1, enc.p2, 7, 4'000'000);
  CHECK(er.equal);
}

TEST_CASE("recognizability decision on the catalog") {
  CHECK(decide_recognizable(catalog_len2()).recognizable);

  RecResult eq = decide_recognizable(catalog_eq());
  CHECK(!eq.recognizable);
  REQUIRE(eq.witness.has_value());
  CHECK(witness_valid(catalog_eq(), eq.tape, *eq.witness));

  RecResult sub = decide_recognizable(catalog_subseq());
  CHECK(!sub.recognizable);
  REQUIRE(sub.witness.has_value());
  CHECK(witness_valid(catalog_subseq(), sub.tape, *sub.witness));

  // congruence class counts keep growing with the window length
  long long c2 = index_probe(catalog_subseq(), 1, 2);
  long long c3 = index_probe(catalog_subseq(), 1, 3);
  long long c4 = index_probe(catalog_subseq(), 1, 4);
  CHECK(c2 < c3);
  CHECK(c3 < c4);
}

TEST_CASE("verdicts are invariant under tape permutation") {
  for (const Mdfa& a : {catalog_len2(), catalog_eq(), catalog_subseq()}) {
    Mdfa sw = permute_tapes(a, {1, 0});
    CHECK(decide_recognizable(a).recognizable == decide_recognizable(sw).recognizable);
  }
}

TEST_CASE("witness words pump to pairwise inequivalent prefixes") {
  Mdfa a = catalog_eq();
  RecResult res = decide_recognizable(a);
  REQUIRE(!res.recognizable);
  const NonRecWitness& w = *res.witness;
  Mdfa view = drat_view(a, res.tape);
  PlainDet p = make_plain(view);
  std::optional<Word> u1 = front_access(p, w.q);
  REQUIRE(u1.has_value());
  std::optional<Word> u1p = to_plain_sigma(*u1, p.emark);
  std::optional<Word> v1p = to_plain_sigma(w.v1, p.emark);
  std::optional<Word> w1p = to_plain_sigma(w.w1, p.emark);
  REQUIRE(u1p.has_value());
  REQUIRE(v1p.has_value());
  REQUIRE(w1p.has_value());
  std::vector<Word> fam;
  for (int n = 0; n <= 4; ++n) {
    Word f = *u1p;
    for (int i = 0; i < n; ++i) f.insert(f.end(), v1p->begin(), v1p->end());
    f.insert(f.end(), w1p->begin(), w1p->end());
    fam.push_back(std::move(f));
  }
  for (size_t i = 0; i < fam.size(); ++i)
    for (size_t j = i + 1; j < fam.size(); ++j)
      CHECK(!approx_equiv(a, res.tape, fam[i], fam[j]));
}

TEST_CASE("equivalence-to-recognizability reduction on fixed pairs") {
  Mdfa l = catalog_len2();
  CHECK(decide_recognizable(eq_to_rec(l, l)).recognizable);

  Mdfa flipped = l;
  for (size_t i = 0; i < flipped.finals.size(); ++i) flipped.finals[i] = !flipped.finals[i];
  REQUIRE(!bounded_equiv(l, flipped).equal);
  RecResult rd = decide_recognizable(eq_to_rec(l, flipped));
  CHECK(!rd.recognizable);
}

TEST_CASE("equivalence-to-recognizability reduction, randomized metamorphic") {
  int checked = 0;
  for (int it = 0; it < 12; ++it) {
    Mdfa a = random_mdfa(2, 2 + it % 3, 2, 300 + it);
    Mdfa b = it % 4 == 0 ? a : random_mdfa(2, 2 + (it + 1) % 3, 2, 400 + it);
    bool same = bounded_equiv(a, b).equal;
    CHECK(decide_recognizable(eq_to_rec(a, b)).recognizable == same);
    ++checked;
  }
  CHECK(checked == 12);
}

TEST_CASE("independent form of bounded-total-length pairs") {
  IndependentOutcome out = build_independent(catalog_len2(), 64);
  REQUIRE(out.independent.has_value());
  CHECK(out.independent->components[0].num_states() == 3);
  CHECK(out.independent->components[1].num_states() == 3);
  Mdfa back = independent_to_det(*out.independent);
  CHECK(bounded_equiv(back, catalog_len2(), 6).equal);
}

TEST_CASE("independent form of the scattered-subword window relations") {
  IndependentOutcome s1 = build_independent(catalog_simon(1), 512);
  REQUIRE(s1.independent.has_value());
  CHECK(s1.independent->components[0].num_states() >= 2);
  Mdfa b1 = independent_to_det(*s1.independent);
  CHECK(bounded_equiv(b1, catalog_simon(1), 6).equal);

  IndependentOutcome s2 = build_independent(catalog_simon(2), 512);
  REQUIRE(s2.independent.has_value());
  CHECK(s2.independent->components[0].num_states() >= 4);
  Mdfa b2 = independent_to_det(*s2.independent);
  CHECK(bounded_equiv(b2, catalog_simon(2), 6).equal);
}

TEST_CASE("independent-form construction reports evidence on a diagonal relation") {
  IndependentOutcome out = build_independent(catalog_eq(), 16);
  CHECK(!out.independent.has_value());
  REQUIRE(out.evidence.has_value());
  CHECK(!out.evidence->recognizable);
}

TEST_CASE("independent-to-deterministic conversion preserves membership") {
  IndependentOutcome out = build_independent(catalog_len2(), 64);
  REQUIRE(out.independent.has_value());
  IndependentKTape ind = *out.independent;
  Mdfa det = independent_to_det(ind);
  std::mt19937_64 rng(77);
  Alphabet sig = ind.sigma;
  for (int it = 0; it < 500; ++it) {
    WordTuple u{random_word(rng, sig.size(), 4), random_word(rng, sig.size(), 4)};
    CHECK(member_independent(ind, u) == member_det(det, u));
  }
  IndependentKTape empty = ind;
  empty.final_tuples.clear();
  CHECK(enumerate_relation(independent_to_det(empty), 4).empty());
  IndependentKTape full = ind;
  for (int i = 0; i < ind.components[0].num_states(); ++i)
    for (int j = 0; j < ind.components[1].num_states(); ++j) full.final_tuples.insert({i, j});
  CHECK(enumerate_relation(independent_to_det(full), 3).size() ==
        enumerate_tuples(2, sig, 3).size());
}
