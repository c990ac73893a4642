#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "relkit/catalog.hpp"
#include "relkit/drat.hpp"
#include "relkit/oracles.hpp"
#include "relkit/sync.hpp"

using namespace relkit;

namespace {

Word w(const Alphabet& s, const std::string& chars) {
  Word out;
  for (char c : chars) out.push_back(s.at(std::string(1, c)));
  return out;
}

// Reference partition computation by brute force: enumerate every simple
// cycle over letter edges among states that can reach a final state, record
// which tape pairs it consumes unequally, and propagate that separation to
// everything reachable from the cycle.
std::vector<bool> oracle_useful(const Mdfa& a) {
  int n = a.num_states();
  std::vector<bool> out(static_cast<size_t>(n), false);
  for (int q = 0; q < n; ++q) {
    // Forward closure from q over all edges; useful iff it meets a final.
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::deque<int> todo{q};
    seen[static_cast<size_t>(q)] = true;
    while (!todo.empty()) {
      int x = todo.front();
      todo.pop_front();
      if (a.finals[static_cast<size_t>(x)]) out[static_cast<size_t>(q)] = true;
      auto push = [&](int d) {
        if (!seen[static_cast<size_t>(d)]) {
          seen[static_cast<size_t>(d)] = true;
          todo.push_back(d);
        }
      };
      for (int c = 0; c < a.sigma.size(); ++c)
        push(a.delta[static_cast<size_t>(x)][static_cast<size_t>(c)]);
      push(a.delta_end[static_cast<size_t>(x)]);
    }
  }
  return out;
}

StatePartitionMap oracle_partitions(const Mdfa& a) {
  int n = a.num_states();
  int k = a.arity;
  std::vector<bool> useful = oracle_useful(a);
  // sep[i][j][q]
  std::vector<std::vector<std::vector<bool>>> sep(
      static_cast<size_t>(k),
      std::vector<std::vector<bool>>(static_cast<size_t>(k),
                                     std::vector<bool>(static_cast<size_t>(n), false)));
  std::vector<bool> is_source(static_cast<size_t>(n), false);
  // DFS over simple paths of letter edges among useful states; an edge back
  // to the path start closes a cycle.
  for (int start = 0; start < n; ++start) {
    if (!useful[static_cast<size_t>(start)]) continue;
    struct Frame {
      int state;
      int next_letter;
    };
    std::vector<Frame> path{{start, 0}};
    std::vector<bool> on_path(static_cast<size_t>(n), false);
    on_path[static_cast<size_t>(start)] = true;
    std::vector<int> consumed(static_cast<size_t>(k), 0);
    while (!path.empty()) {
      Frame& f = path.back();
      if (f.next_letter >= a.sigma.size()) {
        on_path[static_cast<size_t>(f.state)] = false;
        consumed[static_cast<size_t>(a.tape_of[static_cast<size_t>(
            path.size() >= 2 ? path[path.size() - 2].state : f.state)])] -= path.size() >= 2;
        path.pop_back();
        continue;
      }
      int c = f.next_letter++;
      int src = f.state;
      int d = a.delta[static_cast<size_t>(src)][static_cast<size_t>(c)];
      if (!useful[static_cast<size_t>(d)]) continue;
      if (d == start) {
        // Cycle closed: counts = consumed plus the closing edge.
        std::vector<int> cnt = consumed;
        cnt[static_cast<size_t>(a.tape_of[static_cast<size_t>(src)])] += 1;
        bool imbalanced = false;
        for (int i = 0; i < k && !imbalanced; ++i)
          for (int j = i + 1; j < k && !imbalanced; ++j)
            if (cnt[static_cast<size_t>(i)] != cnt[static_cast<size_t>(j)]) imbalanced = true;
        if (imbalanced) {
          for (const Frame& g : path) is_source[static_cast<size_t>(g.state)] = true;
          for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
              if (cnt[static_cast<size_t>(i)] != cnt[static_cast<size_t>(j)])
                for (const Frame& g : path)
                  sep[static_cast<size_t>(i)][static_cast<size_t>(j)]
                     [static_cast<size_t>(g.state)] = true;
        }
        continue;
      }
      if (on_path[static_cast<size_t>(d)]) continue;  // only cycles through start
      on_path[static_cast<size_t>(d)] = true;
      consumed[static_cast<size_t>(a.tape_of[static_cast<size_t>(src)])] += 1;
      path.push_back({d, 0});
    }
  }
  // Propagate each pair's separation forward over all edges.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::deque<int> todo;
      for (int q = 0; q < n; ++q)
        if (sep[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(q)])
          todo.push_back(q);
      while (!todo.empty()) {
        int q = todo.front();
        todo.pop_front();
        auto push = [&](int d) {
          if (!sep[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(d)]) {
            sep[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(d)] = true;
            todo.push_back(d);
          }
        };
        for (int c = 0; c < a.sigma.size(); ++c)
          push(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)]);
        push(a.delta_end[static_cast<size_t>(q)]);
      }
    }
  StatePartitionMap out;
  for (int q = 0; q < n; ++q) {
    std::vector<int> cls(static_cast<size_t>(k), -1);
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < k; ++i) {
      if (cls[static_cast<size_t>(i)] >= 0) continue;
      cls[static_cast<size_t>(i)] = static_cast<int>(sets.size());
      std::vector<int> blk{i};
      for (int j = i + 1; j < k; ++j) {
        if (cls[static_cast<size_t>(j)] >= 0) continue;
        if (!sep[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(q)]) {
          cls[static_cast<size_t>(j)] = cls[static_cast<size_t>(i)];
          blk.push_back(j);
        }
      }
      sets.push_back(std::move(blk));
    }
    out.at.push_back(generated_partition(sets, k));
  }
  return out;
}

std::vector<int> all_tapes(int k) {
  std::vector<int> t(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) t[static_cast<size_t>(i)] = i;
  return t;
}

// Machine reading tape 0 fully first, then tape 1, accepting Sigma* x b*.
Mdfa product_machine() {
  Mdfa m;
  m.arity = 2;
  m.sigma.add("a");
  m.sigma.add("b");
  m.state_names = {"s0", "s1", "s2", "dead"};
  m.tape_of = {0, 1, 0, 0};
  m.initial = 0;
  m.finals = {false, false, true, false};
  m.delta = {{0, 0}, {3, 1}, {3, 3}, {3, 3}};
  m.delta_end = {1, 2, 3, 3};
  return m;
}

// product_machine behind a one-letter preamble on tape 0; the preamble state
// has no cycle, so its tape partition is coarser than everything after it.
Mdfa preamble_machine() {
  Mdfa m = product_machine();
  int pre = m.num_states();
  for (auto& row : m.delta)
    for (int& d : row) d += 1;
  for (int& d : m.delta_end) d += 1;
  m.delta.insert(m.delta.begin(), {1, 1});     // a or b -> old s0
  m.delta_end.insert(m.delta_end.begin(), 4);  // bare end -> old dead
  m.state_names.insert(m.state_names.begin(), "pre");
  m.tape_of.insert(m.tape_of.begin(), 0);
  m.finals.insert(m.finals.begin(), false);
  m.initial = 0;
  (void)pre;
  return m;
}

// Membership set of the summarized single-tape machine, as plain words.
std::set<Word> language_upto(const Mdfa& one_tape, long long bound) {
  std::set<Word> out;
  for (const WordTuple& u : enumerate_relation(one_tape, bound)) out.insert(u[0]);
  return out;
}

// Convolution images of the members of a having per-tape length <= maxlen.
std::set<Word> convolution_image(const Mdfa& a, const Alphabet& blocks, int maxlen) {
  std::set<Word> out;
  for (const WordTuple& u : enumerate_relation(a, static_cast<long long>(maxlen) * a.arity)) {
    bool fits = true;
    for (const Word& c : u)
      if (static_cast<int>(c.size()) > maxlen) fits = false;
    if (fits) out.insert(block_word(blocks, a.sigma, u, all_tapes(a.arity)));
  }
  return out;
}

void check_certificate(const Mdfa& a, const NonSyncEvidence& ev) {
  REQUIRE(a.arity == 2);
  REQUIRE(ev.s.size() == 3);
  int tape = ev.tape;
  int other = 1 - tape;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      auto full = [&](int which) {
        WordTuple t = ev.u;
        const Word& s = ev.s[static_cast<size_t>(which)];
        const Word& z = ev.z[static_cast<size_t>(i)][static_cast<size_t>(j)];
        t[static_cast<size_t>(tape)].insert(t[static_cast<size_t>(tape)].end(), s.begin(),
                                            s.end());
        t[static_cast<size_t>(other)].insert(t[static_cast<size_t>(other)].end(), z.begin(),
                                             z.end());
        return t;
      };
      // The two extensions of the common prefix disagree, so the three
      // prefixes are pairwise non-mergeable states of any automaton for the
      // convolution language.
      CHECK(member_det(a, full(i)) != member_det(a, full(j)));
      // x and y really decompose the convolutions of those tuples.
      ConvWord xi = ev.x[static_cast<size_t>(i)];
      ConvWord xj = ev.x[static_cast<size_t>(j)];
      const ConvWord& yij = ev.y[static_cast<size_t>(i)][static_cast<size_t>(j)];
      ConvWord whole_i = xi;
      whole_i.insert(whole_i.end(), yij.begin(), yij.end());
      ConvWord whole_j = xj;
      whole_j.insert(whole_j.end(), yij.begin(), yij.end());
      CHECK(whole_i == convolve(full(i)));
      CHECK(whole_j == convolve(full(j)));
    }
}

}  // namespace

TEST_CASE("tape partitions match the simple-cycle reference") {
  auto agree = [&](const Mdfa& a) {
    StatePartitionMap got = compute_partitions(a);
    StatePartitionMap want = oracle_partitions(a);
    REQUIRE(got.at.size() == want.at.size());
    for (size_t q = 0; q < got.at.size(); ++q) CHECK(got.at[q] == want.at[q]);
    return got;
  };
  agree(catalog_len2());
  agree(catalog_subseq());
  agree(product_machine());
  agree(preamble_machine());
  StatePartitionMap eq = agree(catalog_eq());
  // The alternating equality machine only has balanced productive cycles, so
  // no state ever separates its tapes -- including the sink states.
  for (const Partition& p : eq.at) CHECK(p == Partition::trivial(2));

  // The subsequence machine pumps tape 1 alone, so its initial state is
  // fully separated.
  Mdfa subseq = catalog_subseq();
  CHECK(compute_partitions(subseq).at[0] == Partition::discrete(2));

  // Acyclic machines impose nothing.
  Mdfa len2 = catalog_len2();
  bool some_trivial = false;
  for (const Partition& p : compute_partitions(len2).at)
    if (p == Partition::trivial(2)) some_trivial = true;
  CHECK(some_trivial);

  for (std::uint64_t seed = 0; seed < 25; ++seed) agree(random_mdfa(2, 5, 2, seed));
  for (std::uint64_t seed = 0; seed < 15; ++seed) agree(random_mdfa(3, 4, 2, seed + 100));
}

TEST_CASE("block letters and words round-trip") {
  Alphabet s;
  s.add("a");
  s.add("b");
  Alphabet blocks = block_alphabet(s, 2);
  CHECK(blocks.size() == 8);  // 3*3 pairs minus the all-pad one
  CHECK(blocks.name(0) == "a:a");
  CHECK(blocks.name(block_letter(blocks, s, {0, 1})) == "a:b");
  CHECK(blocks.name(block_letter(blocks, s, {kPad, 0})) == "-:a");
  CHECK(blocks.name(block_letter(blocks, s, {1, kPad})) == "b:-");
  CHECK_THROWS_AS(block_letter(blocks, s, {kPad, kPad}), InputError);
  CHECK_THROWS_AS(block_letter(blocks, s, {0}), InputError);

  // Width-1 letters coincide with the base alphabet.
  Alphabet singles = block_alphabet(s, 1);
  CHECK(singles.size() == 2);
  CHECK(singles.name(0) == "a");
  CHECK(block_letter(singles, s, {1}) == 1);

  WordTuple u{w(s, "ab"), w(s, "b")};
  Word bw = block_word(blocks, s, u, {0, 1});
  REQUIRE(bw.size() == 2);
  CHECK(bw[0] == block_letter(blocks, s, {0, 1}));
  CHECK(bw[1] == block_letter(blocks, s, {1, kPad}));
  CHECK(block_word(singles, s, u, {1}) == w(s, "b"));
}

TEST_CASE("summarize collapses a balanced machine to its convolution language") {
  Mdfa eq = catalog_eq();
  Alphabet blocks = block_alphabet(eq.sigma, 2);
  SummarizedAutomaton s = summarize(eq, eq.initial, {});
  REQUIRE(s.m.arity == 1);
  CHECK(s.queue_bound == eq.num_states());
  for (const WordTuple& u : enumerate_tuples(2, eq.sigma, 6))
    CHECK(member_det(s.m, {block_word(blocks, eq.sigma, u, {0, 1})}) == member_det(eq, u));
  // Nothing outside the convolution image is accepted.
  CHECK(language_upto(s.m, 4) == convolution_image(eq, blocks, 4));
}

TEST_CASE("summarize hands fully separated states to their component automata") {
  Mdfa m = preamble_machine();
  StatePartitionMap parts = compute_partitions(m);
  CHECK(parts.at[0] == Partition::trivial(2));
  for (int q = 1; q < m.num_states(); ++q) CHECK(parts.at[q] == Partition::discrete(2));

  // At a fully separated state the summarized machine is the relation itself
  // (size-one block letters coincide with the base alphabet).
  Mdfa rooted = m;
  rooted.initial = 1;
  SummarizedAutomaton sep = summarize(m, 1, {});
  REQUIRE(sep.m.arity == 2);
  for (const WordTuple& u : enumerate_tuples(2, m.sigma, 5))
    CHECK(member_det(sep.m, u) == member_det(rooted, u));

  // The preamble state exits into separated territory, so its summarization
  // needs the component automata of every state it can exit to.
  CHECK_THROWS_AS(summarize(m, 0, {}), InputError);
  std::map<int, IndependentKTape> indeps;
  for (int q = 1; q < m.num_states(); ++q) {
    IndependentOutcome io = build_independent(summarize(m, q, {}).m);
    REQUIRE(io.independent);
    indeps[q] = *io.independent;
  }
  Alphabet blocks = block_alphabet(m.sigma, 2);
  SummarizedAutomaton s = summarize(m, 0, indeps);
  REQUIRE(s.m.arity == 1);
  for (const WordTuple& u : enumerate_tuples(2, m.sigma, 5))
    CHECK(member_det(s.m, {block_word(blocks, m.sigma, u, {0, 1})}) == member_det(m, u));
  CHECK(language_upto(s.m, 3) == convolution_image(m, blocks, 3));
}

TEST_CASE("synchronicity verdicts on the catalog") {
  SyncResult eq = decide_synchronous(catalog_eq());
  CHECK(eq.synchronous);
  // All tapes stay glued everywhere: a single layer, nothing to test.
  CHECK(eq.layers[0].size() == static_cast<size_t>(catalog_eq().num_states()));
  CHECK(eq.layers[1].empty());

  CHECK(decide_synchronous(catalog_len2()).synchronous);
  CHECK(decide_synchronous(product_machine()).synchronous);
  CHECK(decide_synchronous(preamble_machine()).synchronous);

  Mdfa subseq = catalog_subseq();
  SyncResult sub = decide_synchronous(subseq);
  CHECK_FALSE(sub.synchronous);
  CHECK(sub.state == 0);
  REQUIRE(sub.failure);
  CHECK_FALSE(sub.failure->recognizable);
  REQUIRE(sub.evidence);
  check_certificate(subseq, *sub.evidence);
}

TEST_CASE("single-tape view of a synchronous relation") {
  auto verify = [&](const Mdfa& a, int maxlen) {
    SyncAutomatonResult r = synchronous_automaton(a);
    REQUIRE(r.sync.synchronous);
    REQUIRE(r.dfa);
    Alphabet blocks = block_alphabet(a.sigma, a.arity);
    for (const WordTuple& u : enumerate_tuples(a.arity, a.sigma, maxlen + 1))
      CHECK(member_dfa(*r.dfa, block_word(blocks, a.sigma, u, all_tapes(a.arity))) ==
            member_det(a, u));
    // Exhaustive over short words of the block alphabet: nothing else.
    std::set<Word> image = convolution_image(a, blocks, 2);
    std::vector<Word> todo{{}};
    for (size_t i = 0; i < todo.size(); ++i) {
      Word cur = todo[i];
      CHECK(member_dfa(*r.dfa, cur) == (image.count(cur) > 0));
      if (cur.size() < 2)
        for (Sym c = 0; c < blocks.size(); ++c) {
          Word nxt = cur;
          nxt.push_back(c);
          todo.push_back(nxt);
        }
    }
  };
  verify(catalog_eq(), 5);
  verify(catalog_len2(), 5);
  verify(product_machine(), 5);
  verify(rec_to_sync(catalog_len2()), 4);

  SyncAutomatonResult neg = synchronous_automaton(catalog_subseq());
  CHECK_FALSE(neg.sync.synchronous);
  CHECK_FALSE(neg.dfa);
}

TEST_CASE("prefix-loop reduction preserves membership") {
  std::mt19937_64 gen(31);
  auto rand_word = [&](const Alphabet& s, int maxlen) {
    Word out;
    int len = static_cast<int>(gen() % static_cast<std::uint64_t>(maxlen + 1));
    for (int i = 0; i < len; ++i)
      out.push_back(static_cast<Sym>(gen() % static_cast<std::uint64_t>(s.size())));
    return out;
  };
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Mdfa a = random_mdfa(2, 4, 2, seed + 300);
    Mdfa b = rec_to_sync(a);
    Sym hash = b.sigma.at("h");
    Sym turn = b.sigma.at("t");
    for (int rep = 0; rep < 20; ++rep) {
      WordTuple u;
      WordTuple plain;
      for (int i = 0; i < 2; ++i) {
        Word wi = rand_word(a.sigma, 3);
        plain.push_back(wi);
        Word marked(static_cast<size_t>(gen() % 3), hash);
        marked.push_back(turn);
        marked.insert(marked.end(), wi.begin(), wi.end());
        u.push_back(marked);
      }
      CHECK(member_det(b, u) == member_det(a, plain));
      // Dropping a turnstile leaves the prefix chain.
      WordTuple broken = u;
      broken[0].erase(std::find(broken[0].begin(), broken[0].end(), turn));
      CHECK_FALSE(member_det(b, broken));
      cases += 2;
    }
  }
  CHECK(cases >= 300);

  // Nondeterministic variant agrees with the deterministic one.
  KTapeAutomaton inf = catalog_infix();
  KTapeAutomaton binf = rec_to_sync(inf);
  Sym hash = binf.sigma.at("h");
  Sym turn = binf.sigma.at("t");
  for (const WordTuple& plain : enumerate_tuples(2, inf.sigma, 4)) {
    WordTuple u;
    for (const Word& wi : plain) {
      Word marked{hash, turn};
      marked.insert(marked.end(), wi.begin(), wi.end());
      u.push_back(marked);
    }
    CHECK(member_nondet(binf, u) == member_nondet(inf, plain));
  }
}

TEST_CASE("reduction turns recognizability into synchronicity") {
  CHECK(decide_synchronous(rec_to_sync(catalog_len2())).synchronous);

  Mdfa noteq = rec_to_sync(catalog_eq());
  SyncResult bad = decide_synchronous(noteq);
  CHECK_FALSE(bad.synchronous);
  REQUIRE(bad.evidence);
  check_certificate(noteq, *bad.evidence);

  int negatives = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Mdfa a = random_mdfa(2, 4, 2, seed + 700);
    bool rec = decide_recognizable(a).recognizable;
    SyncResult sr = decide_synchronous(rec_to_sync(a));
    CHECK(sr.synchronous == rec);
    if (!sr.synchronous) {
      ++negatives;
      REQUIRE(sr.evidence);
      check_certificate(rec_to_sync(a), *sr.evidence);
    }
  }
  CHECK(negatives >= 1);
}
