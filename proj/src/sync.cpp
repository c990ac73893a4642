// sync.cpp -- synchronicity analysis: cycle-imbalance partitions, queue
// summarization, the layered decision procedure, certificates, and the
// recognizability-to-synchronicity reduction.
#include "relkit/sync.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "relkit/oracles.hpp"

namespace relkit {

namespace {

// States from which a final state is reachable (over letter and endmarker
// transitions alike).
std::vector<bool> useful_states(const Mdfa& a) {
  int n = a.num_states();
  std::vector<std::vector<int>> pred(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    for (int c = 0; c < a.sigma.size(); ++c)
      pred[static_cast<size_t>(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)])]
          .push_back(q);
    pred[static_cast<size_t>(a.delta_end[static_cast<size_t>(q)])].push_back(q);
  }
  std::vector<bool> out(static_cast<size_t>(n), false);
  std::deque<int> todo;
  for (int q = 0; q < n; ++q)
    if (a.finals[static_cast<size_t>(q)]) {
      out[static_cast<size_t>(q)] = true;
      todo.push_back(q);
    }
  while (!todo.empty()) {
    int q = todo.front();
    todo.pop_front();
    for (int p : pred[static_cast<size_t>(q)])
      if (!out[static_cast<size_t>(p)]) {
        out[static_cast<size_t>(p)] = true;
        todo.push_back(p);
      }
  }
  return out;
}

// Analysis of one tape pair (i, j): letter-edge subgraph among useful
// states, strongly connected components, and a potential per node. An SCC
// is conflicted iff it contains a cycle consuming unequal amounts from
// tapes i and j (some edge violates the potentials).
struct PairAnalysis {
  SccInfo scc;
  std::vector<long long> pot;
  std::vector<bool> conflicted_scc;
  std::vector<std::vector<int>> succ;  // useful letter edges
};

PairAnalysis analyze_pair(const Mdfa& a, const std::vector<bool>& useful, int i, int j) {
  int n = a.num_states();
  PairAnalysis out;
  out.succ.assign(static_cast<size_t>(n), {});
  for (int q = 0; q < n; ++q) {
    if (!useful[static_cast<size_t>(q)]) continue;
    for (int c = 0; c < a.sigma.size(); ++c) {
      int d = a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
      if (useful[static_cast<size_t>(d)]) out.succ[static_cast<size_t>(q)].push_back(d);
    }
  }
  out.scc = strongly_connected(out.succ);
  out.pot.assign(static_cast<size_t>(n), 0);
  out.conflicted_scc.assign(static_cast<size_t>(out.scc.count), false);
  auto wt = [&](int q) {
    int t = a.tape_of[static_cast<size_t>(q)];
    return t == i ? 1LL : (t == j ? -1LL : 0LL);
  };
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (int r = 0; r < n; ++r) {
    if (seen[static_cast<size_t>(r)] || !useful[static_cast<size_t>(r)]) continue;
    seen[static_cast<size_t>(r)] = true;
    std::deque<int> todo{r};
    while (!todo.empty()) {
      int q = todo.front();
      todo.pop_front();
      for (int d : out.succ[static_cast<size_t>(q)]) {
        if (out.scc.comp[static_cast<size_t>(d)] != out.scc.comp[static_cast<size_t>(q)])
          continue;
        if (!seen[static_cast<size_t>(d)]) {
          seen[static_cast<size_t>(d)] = true;
          out.pot[static_cast<size_t>(d)] = out.pot[static_cast<size_t>(q)] + wt(q);
          todo.push_back(d);
        }
      }
    }
  }
  for (int q = 0; q < n; ++q) {
    if (!useful[static_cast<size_t>(q)]) continue;
    for (int d : out.succ[static_cast<size_t>(q)]) {
      if (out.scc.comp[static_cast<size_t>(d)] != out.scc.comp[static_cast<size_t>(q)])
        continue;
      if (out.pot[static_cast<size_t>(d)] != out.pot[static_cast<size_t>(q)] + wt(q))
        out.conflicted_scc[static_cast<size_t>(out.scc.comp[static_cast<size_t>(q)])] = true;
    }
  }
  return out;
}

// Forward reachability over all transitions (letters and endmarkers).
std::vector<bool> reach_from(const Mdfa& a, const std::vector<bool>& sources) {
  int n = a.num_states();
  std::vector<bool> out = sources;
  std::deque<int> todo;
  for (int q = 0; q < n; ++q)
    if (out[static_cast<size_t>(q)]) todo.push_back(q);
  auto push = [&](int d) {
    if (!out[static_cast<size_t>(d)]) {
      out[static_cast<size_t>(d)] = true;
      todo.push_back(d);
    }
  };
  while (!todo.empty()) {
    int q = todo.front();
    todo.pop_front();
    for (int c = 0; c < a.sigma.size(); ++c)
      push(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)]);
    push(a.delta_end[static_cast<size_t>(q)]);
  }
  return out;
}

}  // namespace

StatePartitionMap compute_partitions(const Mdfa& a) {
  require_valid(a, "compute_partitions");
  int n = a.num_states();
  int k = a.arity;
  std::vector<bool> useful = useful_states(a);
  // sep[q] holds a bit per tape pair (i, j), i < j.
  int npairs = k * (k - 1) / 2;
  std::vector<std::vector<bool>> sep(static_cast<size_t>(npairs),
                                     std::vector<bool>(static_cast<size_t>(n), false));
  int pidx = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j, ++pidx) {
      PairAnalysis pa = analyze_pair(a, useful, i, j);
      std::vector<bool> src(static_cast<size_t>(n), false);
      bool any = false;
      for (int q = 0; q < n; ++q)
        if (useful[static_cast<size_t>(q)] &&
            pa.conflicted_scc[static_cast<size_t>(pa.scc.comp[static_cast<size_t>(q)])]) {
          src[static_cast<size_t>(q)] = true;
          any = true;
        }
      if (any) sep[static_cast<size_t>(pidx)] = reach_from(a, src);
    }
  }
  StatePartitionMap out;
  out.at.reserve(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    // Tapes never separated at q form equivalence classes: every
    // constraining cycle groups tapes by its per-tape lengths.
    std::vector<int> cls(static_cast<size_t>(k), -1);
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < k; ++i) {
      if (cls[static_cast<size_t>(i)] >= 0) continue;
      cls[static_cast<size_t>(i)] = static_cast<int>(sets.size());
      std::vector<int> blk{i};
      for (int j = i + 1; j < k; ++j) {
        if (cls[static_cast<size_t>(j)] >= 0) continue;
        int p = 0;
        for (int x = 0; x < k; ++x)
          for (int y = x + 1; y < k; ++y, ++p)
            if (x == i && y == j) goto found;
      found:
        if (!sep[static_cast<size_t>(p)][static_cast<size_t>(q)]) {
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

// --- block letters ------------------------------------------------------------

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

namespace {

// Letters for tracks grouped by `sizes` (ascending distinct tuple widths):
// all s-tuples over sigma plus padding, except the all-pad tuple, appended
// size group by size group. Width-1 letters keep their base symbol values.
Alphabet sizes_alphabet(const Alphabet& sigma, const std::vector<int>& sizes) {
  int g = sigma.size();
  Alphabet out;
  for (int s : sizes) {
    std::vector<int> digit(static_cast<size_t>(s), 0);
    long long count = ipow(g + 1, s);
    for (long long v = 0; v < count; ++v) {
      long long rem = v;
      bool allpad = true;
      for (int p = s - 1; p >= 0; --p) {
        digit[static_cast<size_t>(p)] = static_cast<int>(rem % (g + 1));
        rem /= g + 1;
        if (digit[static_cast<size_t>(p)] != g) allpad = false;
      }
      if (allpad) continue;
      std::string name;
      for (int p = 0; p < s; ++p) {
        if (s > 1 && p > 0) name += ':';
        name += digit[static_cast<size_t>(p)] == g ? "-" : sigma.name(digit[static_cast<size_t>(p)]);
      }
      out.add(name);
    }
  }
  return out;
}

Sym sizes_letter(const std::vector<int>& sizes, int g, const TupleLetter& t) {
  int s = static_cast<int>(t.size());
  long long off = 0;
  bool present = false;
  for (int x : sizes) {
    if (x == s) {
      present = true;
      break;
    }
    off += ipow(g + 1, x) - 1;
  }
  if (!present) throw InputError("block_letter: tuple width not in the alphabet");
  long long v = 0;
  bool allpad = true;
  for (Sym c : t) {
    int d;
    if (c == kPad) {
      d = g;
    } else if (c >= 0 && c < g) {
      d = c;
      allpad = false;
    } else {
      throw InputError("block_letter: symbol out of range");
    }
    v = v * (g + 1) + d;
  }
  if (allpad) throw InputError("block_letter: all-pad tuple has no letter");
  return static_cast<Sym>(off + v);
}

std::vector<int> partition_sizes(const Partition& P) {
  std::vector<int> sizes;
  for (const auto& b : P.blocks) sizes.push_back(static_cast<int>(b.size()));
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

}  // namespace

Alphabet block_alphabet(const Alphabet& sigma, int k) {
  if (k < 1) throw InputError("block_alphabet: k must be >= 1");
  return sizes_alphabet(sigma, {k});
}

Sym block_letter(const Alphabet& blocks, const Alphabet& sigma, const TupleLetter& t) {
  int g = sigma.size();
  if (blocks.size() != static_cast<Sym>(ipow(g + 1, static_cast<int>(t.size())) - 1))
    throw InputError("block_letter: tuple width does not match the alphabet");
  return sizes_letter({static_cast<int>(t.size())}, g, t);
}

Word block_word(const Alphabet& blocks, const Alphabet& sigma, const WordTuple& u,
                const std::vector<int>& tapes) {
  WordTuple proj;
  proj.reserve(tapes.size());
  for (int t : tapes) proj.push_back(u.at(static_cast<size_t>(t)));
  Word out;
  for (const TupleLetter& l : convolve(proj)) out.push_back(block_letter(blocks, sigma, l));
  return out;
}

// --- summarization ------------------------------------------------------------

namespace {

// Decoded form of every letter of a sizes-grouped alphabet: one symbol per
// track, kPad for padding.
std::vector<TupleLetter> decode_sizes_letters(const std::vector<int>& sizes, int g) {
  std::vector<TupleLetter> out;
  for (int s : sizes) {
    long long count = ipow(g + 1, s);
    // The skipped all-pad tuple is the lexicographically last of each size,
    // so indices below it are unshifted.
    for (long long v = 0; v < count - 1; ++v) {
      long long rem = v;
      TupleLetter t(static_cast<size_t>(s));
      for (int p = s - 1; p >= 0; --p) {
        int d = static_cast<int>(rem % (g + 1));
        rem /= g + 1;
        t[static_cast<size_t>(p)] = d == g ? kPad : d;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Shared context of one summarization.
struct SumCtx {
  const Mdfa* a = nullptr;
  const StatePartitionMap* parts = nullptr;
  const std::map<int, IndependentKTape>* indep = nullptr;
  Alphabet blocks;
  std::vector<TupleLetter> comp;  // per block letter
  Partition P;
  int k = 0, t = 0, qcap = 0;
  std::vector<int> block_of;  // source tape -> block index of P
  std::vector<bool> in_P;     // state partition equals P
};

using Key = std::vector<int>;

// Key layouts (all segments are ints):
//   part 1:  {0, p, closed, ended, endfed,  k x (len, syms...)}
//   part 2:  {1, qp, phase, closed, ended, done,  t'(qp) x dfa,  k x queue}
//   finish:  {2, fin, closed}
struct Queues {
  std::vector<Word> q;
  void parse(const Key& key, size_t off, int k) {
    q.assign(static_cast<size_t>(k), {});
    for (int l = 0; l < k; ++l) {
      int len = key[off++];
      for (int x = 0; x < len; ++x) q[static_cast<size_t>(l)].push_back(key[off++]);
    }
  }
  void emit(Key& key) const {
    for (const Word& w : q) {
      key.push_back(static_cast<int>(w.size()));
      for (Sym s : w) key.push_back(s);
    }
  }
  bool all_empty() const {
    for (const Word& w : q)
      if (!w.empty()) return false;
    return true;
  }
};

struct Part2 {
  int qp = 0, phase = 0, closed = 0, ended = 0, done = 0;
  std::vector<int> dfa;
  Queues qs;
};

Key finish_key(bool fin, int closed) { return {2, fin ? 1 : 0, closed}; }

class Summarizer {
 public:
  SumCtx c;

  std::optional<Key> normalize1(int p, int closed, int ended, int endfed, Queues qs) const {
    const Mdfa& a = *c.a;
    while (true) {
      if (!c.in_P[static_cast<size_t>(p)]) return enter_part2(p, closed, ended, std::move(qs));
      int l = a.tape_of[static_cast<size_t>(p)];
      Word& w = qs.q[static_cast<size_t>(l)];
      if (!w.empty()) {
        p = a.delta[static_cast<size_t>(p)][static_cast<size_t>(w.front())];
        w.erase(w.begin());
        continue;
      }
      if (ended & (1 << l)) {
        if (!(endfed & (1 << l))) {
          p = a.delta_end[static_cast<size_t>(p)];
          endfed |= 1 << l;
          continue;
        }
        // The source machine demands an exhausted tape and can never move
        // again; any leftover queue symbol is unconsumed input, and a run
        // only accepts when every component's endmarker has been consumed.
        bool fin = a.finals[static_cast<size_t>(p)] && qs.all_empty() &&
                   endfed == (1 << c.k) - 1;
        return finish_key(fin, closed);
      }
      break;
    }
    Key key{0, p, closed, ended, endfed};
    qs.emit(key);
    return key;
  }

  // Feed one decoded convolution letter to the component automaton `bi` of
  // the independent machine at p2.qp. Returns false on an input that no
  // valid convolution can contain.
  bool feed(Part2& p2, int bi, const TupleLetter& l) const {
    bool allpad = true;
    for (Sym s : l)
      if (s != kPad) allpad = false;
    if (allpad) {
      p2.done |= 1 << bi;
      return true;
    }
    if (p2.done & (1 << bi)) return false;
    const Dfa& d = c.indep->at(p2.qp).components[static_cast<size_t>(bi)];
    // The component automata read the finer state's own track alphabet.
    Sym sym = sizes_letter(partition_sizes(c.parts->at[static_cast<size_t>(p2.qp)]),
                           c.a->sigma.size(), l);
    p2.dfa[static_cast<size_t>(bi)] =
        d.delta[static_cast<size_t>(p2.dfa[static_cast<size_t>(bi)])][static_cast<size_t>(sym)];
    return true;
  }

  // Drain the queues of source block i into the component automata; used
  // when tape i has ended and no further live letters can arrive.
  bool drain_block(Part2& p2, int i) const {
    const Partition& Pp = c.parts->at[static_cast<size_t>(p2.qp)];
    const std::vector<int>& B = c.P.blocks[static_cast<size_t>(i)];
    while (true) {
      bool any = false;
      for (int l : B)
        if (!p2.qs.q[static_cast<size_t>(l)].empty()) any = true;
      if (!any) break;
      std::vector<Sym> cl(static_cast<size_t>(c.k), kPad);
      for (int l : B) {
        Word& w = p2.qs.q[static_cast<size_t>(l)];
        if (!w.empty()) {
          cl[static_cast<size_t>(l)] = w.front();
          w.erase(w.begin());
        }
      }
      for (size_t bi = 0; bi < Pp.blocks.size(); ++bi) {
        if (c.block_of[static_cast<size_t>(Pp.blocks[bi][0])] != i) continue;
        TupleLetter t;
        for (int l : Pp.blocks[bi]) t.push_back(cl[static_cast<size_t>(l)]);
        if (!feed(p2, static_cast<int>(bi), t)) return false;
      }
    }
    return true;
  }

  std::optional<Key> pack2(Part2 p2) const {
    // Skip tapes that already ended, draining their queues; finish once all
    // tapes are done.
    while (p2.phase < c.t && (p2.closed & (1 << p2.phase))) ++p2.phase;
    if (p2.phase == c.t) {
      bool fin = c.indep->at(p2.qp).final_tuples.count(p2.dfa) > 0;
      return finish_key(fin, p2.closed);
    }
    Key key{1, p2.qp, p2.phase, p2.closed, p2.ended, p2.done};
    for (int d : p2.dfa) key.push_back(d);
    p2.qs.emit(key);
    return key;
  }

  std::optional<Key> enter_part2(int qp, int closed, int ended, Queues qs) const {
    if (!c.indep->count(qp))
      throw InputError("summarize: missing independent automaton for state " +
                       c.a->state_names[static_cast<size_t>(qp)]);
    const IndependentKTape& ind = c.indep->at(qp);
    Part2 p2;
    p2.qp = qp;
    p2.closed = closed;
    p2.ended = ended;
    p2.qs = std::move(qs);
    for (const Dfa& d : ind.components) p2.dfa.push_back(d.initial);
    for (int i = 0; i < c.t; ++i)
      if (closed & (1 << i))
        if (!drain_block(p2, i)) return std::nullopt;
    return pack2(std::move(p2));
  }

  std::optional<Key> step(const Key& key, Sym x) const {
    const Mdfa& a = *c.a;
    if (key[0] == 2) {
      if (x != kEnd) return std::nullopt;
      int closed = key[2];
      int i = 0;
      while (i < c.t && (closed & (1 << i))) ++i;
      if (i == c.t) return std::nullopt;
      return finish_key(key[1] != 0, closed | (1 << i));
    }
    if (key[0] == 0) {
      int p = key[1], closed = key[2], ended = key[3], endfed = key[4];
      Queues qs;
      qs.parse(key, 5, c.k);
      int i = c.block_of[static_cast<size_t>(a.tape_of[static_cast<size_t>(p)])];
      const std::vector<int>& B = c.P.blocks[static_cast<size_t>(i)];
      if (x == kEnd) {
        closed |= 1 << i;
        for (int l : B) ended |= 1 << l;
        return normalize1(p, closed, ended, endfed, std::move(qs));
      }
      const TupleLetter& t = c.comp[static_cast<size_t>(x)];
      if (static_cast<int>(t.size()) != static_cast<int>(B.size())) return std::nullopt;
      for (size_t j = 0; j < B.size(); ++j) {
        int l = B[j];
        Sym s = t[j];
        if (s == kPad) {
          ended |= 1 << l;
        } else {
          if (ended & (1 << l)) return std::nullopt;
          Word& w = qs.q[static_cast<size_t>(l)];
          if (static_cast<int>(w.size()) >= c.qcap) return std::nullopt;
          w.push_back(s);
        }
      }
      return normalize1(p, closed, ended, endfed, std::move(qs));
    }
    // part 2
    Part2 p2;
    p2.qp = key[1];
    p2.phase = key[2];
    p2.closed = key[3];
    p2.ended = key[4];
    p2.done = key[5];
    const Partition& Pp = c.parts->at[static_cast<size_t>(p2.qp)];
    int tp = static_cast<int>(Pp.blocks.size());
    p2.dfa.assign(key.begin() + 6, key.begin() + 6 + tp);
    p2.qs.parse(key, static_cast<size_t>(6 + tp), c.k);
    int i = p2.phase;
    const std::vector<int>& B = c.P.blocks[static_cast<size_t>(i)];
    if (x == kEnd) {
      p2.closed |= 1 << i;
      for (int l : B) p2.ended |= 1 << l;
      if (!drain_block(p2, i)) return std::nullopt;
      return pack2(std::move(p2));
    }
    const TupleLetter& t = c.comp[static_cast<size_t>(x)];
    if (static_cast<int>(t.size()) != static_cast<int>(B.size())) return std::nullopt;
    std::vector<Sym> cl(static_cast<size_t>(c.k), kPad);
    for (size_t j = 0; j < B.size(); ++j) {
      int l = B[j];
      Sym s = t[j];
      Word& w = p2.qs.q[static_cast<size_t>(l)];
      if (!w.empty()) {
        cl[static_cast<size_t>(l)] = w.front();
        w.erase(w.begin());
        if (s == kPad) {
          p2.ended |= 1 << l;
        } else {
          if (p2.ended & (1 << l)) return std::nullopt;
          w.push_back(s);
        }
      } else {
        if (s == kPad) {
          p2.ended |= 1 << l;
          cl[static_cast<size_t>(l)] = kPad;
        } else {
          if (p2.ended & (1 << l)) return std::nullopt;
          cl[static_cast<size_t>(l)] = s;
        }
      }
    }
    for (size_t bi = 0; bi < Pp.blocks.size(); ++bi) {
      if (c.block_of[static_cast<size_t>(Pp.blocks[bi][0])] != i) continue;
      TupleLetter sub;
      for (int l : Pp.blocks[bi]) sub.push_back(cl[static_cast<size_t>(l)]);
      if (!feed(p2, static_cast<int>(bi), sub)) return std::nullopt;
    }
    return pack2(std::move(p2));
  }

  int owner(const Key& key) const {
    if (key[0] == 0)
      return c.block_of[static_cast<size_t>(c.a->tape_of[static_cast<size_t>(key[1])])];
    if (key[0] == 1) return key[2];
    int closed = key[2];
    for (int i = 0; i < c.t; ++i)
      if (!(closed & (1 << i))) return i;
    return 0;
  }

  bool is_final(const Key& key) const {
    return key[0] == 2 && key[1] != 0 && key[2] == (1 << c.t) - 1;
  }
};

SummarizedAutomaton summarize_impl(const Mdfa& a, const StatePartitionMap& parts,
                                   const Partition& P, int q,
                                   const std::map<int, IndependentKTape>& independents,
                                   long long state_cap) {
  std::vector<int> sizes = partition_sizes(P);
  Summarizer s;
  s.c.a = &a;
  s.c.parts = &parts;
  s.c.indep = &independents;
  s.c.blocks = sizes_alphabet(a.sigma, sizes);
  s.c.comp = decode_sizes_letters(sizes, a.sigma.size());
  s.c.P = P;
  s.c.k = a.arity;
  s.c.t = static_cast<int>(P.blocks.size());
  s.c.qcap = a.num_states();
  s.c.block_of.assign(static_cast<size_t>(a.arity), 0);
  for (size_t b = 0; b < P.blocks.size(); ++b)
    for (int l : P.blocks[b]) s.c.block_of[static_cast<size_t>(l)] = static_cast<int>(b);
  s.c.in_P.clear();
  for (int x = 0; x < a.num_states(); ++x)
    s.c.in_P.push_back(parts.at[static_cast<size_t>(x)] == P);

  Queues empty;
  empty.q.assign(static_cast<size_t>(a.arity), {});
  std::optional<Key> init = s.normalize1(q, 0, 0, 0, empty);
  if (!init) init = finish_key(false, 0);

  DetBuild b;
  b.arity = s.c.t;
  b.sigma = s.c.blocks;
  b.owner = [s](const Key& key) { return s.owner(key); };
  b.step = [s](const Key& key, Sym x) { return s.step(key, x); };
  b.is_final = [s](const Key& key) { return s.is_final(key); };

  SummarizedAutomaton out;
  out.m = build_det(b, *init, state_cap);
  out.source = q;
  out.part = P;
  out.queue_bound = a.num_states();
  return out;
}

}  // namespace

SummarizedAutomaton summarize(const Mdfa& a, int q,
                              const std::map<int, IndependentKTape>& independents,
                              const SyncOptions& opt) {
  require_valid(a, "summarize");
  if (q < 0 || q >= a.num_states()) throw InputError("summarize: state out of range");
  StatePartitionMap parts = compute_partitions(a);
  return summarize_impl(a, parts, parts.at[static_cast<size_t>(q)], q, independents,
                        opt.state_cap);
}

// --- non-synchronicity certificate ---------------------------------------------

namespace {

// Breadth-first path over letter edges; returns the per-tape words read, or
// nullopt. `within` optionally restricts the path to one set of states.
std::optional<WordTuple> letter_path(const Mdfa& a, int from, int to,
                                     const std::vector<bool>* within) {
  int n = a.num_states();
  std::vector<int> par(static_cast<size_t>(n), -1), parc(static_cast<size_t>(n), -1);
  std::vector<bool> seen(static_cast<size_t>(n), false);
  seen[static_cast<size_t>(from)] = true;
  std::deque<int> todo{from};
  while (!todo.empty() && !seen[static_cast<size_t>(to)]) {
    int q = todo.front();
    todo.pop_front();
    for (int c = 0; c < a.sigma.size(); ++c) {
      int d = a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
      if (seen[static_cast<size_t>(d)]) continue;
      if (within && !(*within)[static_cast<size_t>(d)]) continue;
      seen[static_cast<size_t>(d)] = true;
      par[static_cast<size_t>(d)] = q;
      parc[static_cast<size_t>(d)] = c;
      todo.push_back(d);
    }
  }
  if (!seen[static_cast<size_t>(to)]) return std::nullopt;
  std::vector<std::pair<int, int>> steps;  // (state, letter)
  int cur = to;
  while (cur != from) {
    steps.emplace_back(par[static_cast<size_t>(cur)], parc[static_cast<size_t>(cur)]);
    cur = par[static_cast<size_t>(cur)];
  }
  std::reverse(steps.begin(), steps.end());
  WordTuple u(static_cast<size_t>(a.arity));
  for (auto [s, c] : steps) u[static_cast<size_t>(a.tape_of[static_cast<size_t>(s)])].push_back(c);
  return u;
}

void concat_tuple(WordTuple& acc, const WordTuple& w) {
  for (size_t t = 0; t < acc.size(); ++t)
    acc[t].insert(acc[t].end(), w[t].begin(), w[t].end());
}

// Three pairwise inequivalent front-tape classes of the relation from q,
// found by scanning short words and separating with the exact congruence.
std::optional<std::vector<Word>> find_reps(const Mdfa& rootedq, int tape,
                                           const SyncOptions& opt) {
  std::vector<Word> reps;
  long long scanned = 0;
  bool done = false;
  for_each_tuple(1, rootedq.sigma, opt.cert_rep_len_cap, [&](const WordTuple& w) {
    if (++scanned > opt.cert_rep_scan_cap) return false;
    bool fresh = true;
    for (const Word& r : reps)
      if (approx_equiv(rootedq, tape, r, w[0])) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(w[0]);
    if (reps.size() == 3) {
      done = true;
      return false;
    }
    return true;
  });
  if (!done) return std::nullopt;
  return reps;
}

std::optional<NonSyncEvidence> build_certificate(const Mdfa& a, int q, const SyncOptions& opt) {
  if (a.arity != 2) return std::nullopt;
  std::vector<bool> useful = useful_states(a);
  PairAnalysis pa = analyze_pair(a, useful, 0, 1);
  int n = a.num_states();
  for (int r = 0; r < n; ++r) {
    if (!useful[static_cast<size_t>(r)]) continue;
    int comp = pa.scc.comp[static_cast<size_t>(r)];
    if (!pa.conflicted_scc[static_cast<size_t>(comp)]) continue;
    auto to_r = letter_path(a, a.initial, r, nullptr);
    auto r_to_q = letter_path(a, r, q, nullptr);
    if (!to_r || !r_to_q) continue;
    // Extract an imbalanced cycle at r: spanning-tree path to a
    // potential-violating edge, then back within the component.
    std::vector<bool> in_comp(static_cast<size_t>(n), false);
    for (int x = 0; x < n; ++x)
      if (pa.scc.comp[static_cast<size_t>(x)] == comp) in_comp[static_cast<size_t>(x)] = true;
    std::optional<WordTuple> cyc;
    for (int x = 0; x < n && !cyc; ++x) {
      if (!in_comp[static_cast<size_t>(x)]) continue;
      for (int c = 0; c < a.sigma.size() && !cyc; ++c) {
        int d = a.delta[static_cast<size_t>(x)][static_cast<size_t>(c)];
        if (!in_comp[static_cast<size_t>(d)] || !useful[static_cast<size_t>(d)]) continue;
        long long w = a.tape_of[static_cast<size_t>(x)] == 0 ? 1 : -1;
        if (pa.pot[static_cast<size_t>(d)] == pa.pot[static_cast<size_t>(x)] + w) continue;
        auto head = letter_path(a, r, x, &in_comp);
        auto tail = letter_path(a, d, r, &in_comp);
        if (!head || !tail) continue;
        WordTuple v = *head;
        v[static_cast<size_t>(a.tape_of[static_cast<size_t>(x)])].push_back(c);
        concat_tuple(v, *tail);
        if (v[0].size() != v[1].size()) cyc = v;
      }
    }
    if (!cyc) continue;
    int tape = (*cyc)[0].size() < (*cyc)[1].size() ? 0 : 1;
    int other = 1 - tape;
    long long gain = static_cast<long long>((*cyc)[static_cast<size_t>(other)].size()) -
                     static_cast<long long>((*cyc)[static_cast<size_t>(tape)].size());

    Mdfa rootedq = a;
    rootedq.initial = q;
    auto reps = find_reps(rootedq, tape, opt);
    if (!reps) continue;
    long long maxs = 0;
    for (const Word& s : *reps) maxs = std::max(maxs, static_cast<long long>(s.size()));

    NonSyncEvidence ev;
    ev.tape = tape;
    ev.s = *reps;
    ev.z.assign(3, std::vector<Word>(3));
    ev.y.assign(3, std::vector<ConvWord>(3));
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = i + 1; j < 3 && ok; ++j) {
        Mdfa ri = residual_fixed(rootedq, tape, (*reps)[static_cast<size_t>(i)]);
        Mdfa rj = residual_fixed(rootedq, tape, (*reps)[static_cast<size_t>(j)]);
        EquivResult er = bounded_equiv(ri, rj);
        if (er.equal || !er.counterexample) {
          ok = false;
          break;
        }
        ev.z[static_cast<size_t>(i)][static_cast<size_t>(j)] = (*er.counterexample)[0];
      }
    if (!ok) continue;

    // Pump the cycle until the long tape leads by at least the longest
    // representative.
    WordTuple u = *to_r;
    long long delay = static_cast<long long>(u[static_cast<size_t>(other)].size()) +
                      static_cast<long long>((*r_to_q)[static_cast<size_t>(other)].size()) -
                      static_cast<long long>(u[static_cast<size_t>(tape)].size()) -
                      static_cast<long long>((*r_to_q)[static_cast<size_t>(tape)].size());
    long long pumps = 0;
    while (delay < maxs) {
      delay += gain;
      ++pumps;
    }
    for (long long x = 0; x < pumps; ++x) concat_tuple(u, *cyc);
    concat_tuple(u, *r_to_q);
    ev.u = u;

    for (int i = 0; i < 3; ++i) {
      WordTuple ti = u;
      ti[static_cast<size_t>(tape)].insert(ti[static_cast<size_t>(tape)].end(),
                                           (*reps)[static_cast<size_t>(i)].begin(),
                                           (*reps)[static_cast<size_t>(i)].end());
      ev.x.push_back(convolve(ti));
    }
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = i + 1; j < 3 && ok; ++j) {
        const Word& z = ev.z[static_cast<size_t>(i)][static_cast<size_t>(j)];
        ConvWord y;
        for (Sym s : z) {
          TupleLetter l(2, kPad);
          l[static_cast<size_t>(other)] = s;
          y.push_back(l);
        }
        ev.y[static_cast<size_t>(i)][static_cast<size_t>(j)] = y;
        auto full = [&](int which) {
          WordTuple t = u;
          const Word& s = ev.s[static_cast<size_t>(which)];
          t[static_cast<size_t>(tape)].insert(t[static_cast<size_t>(tape)].end(), s.begin(),
                                              s.end());
          t[static_cast<size_t>(other)].insert(t[static_cast<size_t>(other)].end(), z.begin(),
                                               z.end());
          return t;
        };
        if (member_det(a, full(i)) == member_det(a, full(j))) ok = false;
      }
    if (ok) return ev;
  }
  return std::nullopt;
}

}  // namespace

// --- layered decision ----------------------------------------------------------

namespace {

// Expansion of an Mdfa whose states remember which endmarkers the run has
// already consumed. The relation is unchanged, but the relation seen from a
// state now determines the remaining behaviour completely: a state reached
// through an endmarker edge forces its tape to stay empty instead of
// pretending the endmarker is still pending. The layered decision roots
// summarized machines at arbitrary states, so it needs this.
struct ConfigExpansion {
  Mdfa m;
  std::vector<int> orig;  // source state per expanded state
};

ConfigExpansion config_expand(const Mdfa& a) {
  int k = a.arity;
  ConfigExpansion out;
  out.m.arity = k;
  out.m.sigma = a.sigma;
  std::map<std::pair<int, int>, int> id;  // (state, consumed mask) -> index
  std::vector<std::pair<int, int>> todo;
  auto intern = [&](int p, int mask) {
    auto it = id.find({p, mask});
    if (it != id.end()) return it->second;
    int x = static_cast<int>(id.size());
    id[{p, mask}] = x;
    todo.emplace_back(p, mask);
    return x;
  };
  intern(a.initial, 0);
  std::vector<std::vector<int>> delta;
  std::vector<int> delta_end;
  for (size_t i = 0; i < todo.size(); ++i) {
    auto [p, mask] = todo[i];
    out.orig.push_back(p);
    out.m.state_names.push_back(a.state_names[static_cast<size_t>(p)] + "/" +
                                std::to_string(mask));
    int l = a.tape_of[static_cast<size_t>(p)];
    out.m.tape_of.push_back(l);
    out.m.finals.push_back(a.finals[static_cast<size_t>(p)]);
    std::vector<int> row(static_cast<size_t>(a.sigma.size()), -1);  // -1 = dead
    int end;
    if (mask & (1 << l)) {
      // The tape this state reads is already exhausted: the machine is stuck
      // and accepts exactly the all-empty remainder when the state is final.
      // The endmarker self-loop keeps the state (and its finality) in place.
      end = static_cast<int>(i);
    } else {
      for (int c = 0; c < a.sigma.size(); ++c)
        row[static_cast<size_t>(c)] =
            intern(a.delta[static_cast<size_t>(p)][static_cast<size_t>(c)], mask);
      end = intern(a.delta_end[static_cast<size_t>(p)], mask | (1 << l));
    }
    delta.push_back(std::move(row));
    delta_end.push_back(end);
  }
  int dead = static_cast<int>(todo.size());
  for (auto& row : delta)
    for (int& d : row)
      if (d < 0) d = dead;
  out.m.delta = std::move(delta);
  out.m.delta_end = std::move(delta_end);
  out.m.initial = 0;
  out.m.state_names.push_back("dead");
  out.m.tape_of.push_back(0);
  out.m.finals.push_back(false);
  out.m.delta.emplace_back(static_cast<size_t>(a.sigma.size()), dead);
  out.m.delta_end.push_back(dead);
  out.orig.push_back(-1);
  return out;
}

struct Driver {
  Mdfa src;  // reachable part of the input
  ConfigExpansion cx;
  StatePartitionMap parts;  // over cx.m
  std::map<int, IndependentKTape> indep;
  SyncResult res;

  // States reported outward are states of `src`.
  int report(int q) const { return cx.orig[static_cast<size_t>(q)]; }

  void fail(int q, std::optional<RecResult> why, const SyncOptions& opt) {
    res.synchronous = false;
    res.state = report(q);
    res.failure = std::move(why);
    if (res.state >= 0) res.evidence = build_certificate(src, res.state, opt);
  }

  bool run(const SyncOptions& opt, bool indep_all_layers) {
    const Mdfa& a = cx.m;
    int k = a.arity;
    std::vector<std::vector<int>> layers(static_cast<size_t>(k));
    res.layers.assign(static_cast<size_t>(k), {});
    for (int q = 0; q < a.num_states(); ++q) {
      size_t t = parts.at[static_cast<size_t>(q)].blocks.size() - 1;
      layers[t].push_back(q);
      if (report(q) >= 0) res.layers[t].push_back(report(q));
    }
    for (auto& l : res.layers) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    for (int t = k; t >= 2; --t) {
      for (int q : layers[static_cast<size_t>(t - 1)]) {
        const std::string& name = a.state_names[static_cast<size_t>(q)];
        SummarizedAutomaton s =
            summarize_impl(a, parts, parts.at[static_cast<size_t>(q)], q, indep, opt.state_cap);
        RecResult r;
        try {
          r = decide_recognizable(s.m, opt.rec);
        } catch (const BudgetError& e) {
          throw BudgetError("decide_synchronous: state " + name +
                                ", recognizability test: " + e.what(),
                            e.needed);
        }
        if (!r.recognizable) {
          fail(q, r, opt);
          return false;
        }
        if (t > 2 || indep_all_layers) {
          IndependentOutcome io;
          try {
            io = build_independent(s.m, opt.indep_class_cap);
          } catch (const BudgetError& e) {
            throw BudgetError("decide_synchronous: state " + name +
                                  ", independent form: " + e.what(),
                              e.needed);
          }
          if (!io.independent) {
            fail(q, io.evidence, opt);
            return false;
          }
          indep[q] = *io.independent;
        }
      }
    }
    res.synchronous = true;
    return true;
  }
};

Driver make_driver(const Mdfa& a) {
  Driver d;
  require_valid(a, "decide_synchronous");
  d.src = reachable_part(a);
  d.cx = config_expand(d.src);
  d.parts = compute_partitions(d.cx.m);
  return d;
}

}  // namespace

SyncResult decide_synchronous(const Mdfa& a, const SyncOptions& opt) {
  Driver d = make_driver(a);
  d.run(opt, false);
  return d.res;
}

SyncAutomatonResult synchronous_automaton(const Mdfa& a, const SyncOptions& opt) {
  Driver d = make_driver(a);
  SyncAutomatonResult out;
  if (!d.run(opt, true)) {
    out.sync = d.res;
    return out;
  }
  out.sync = d.res;
  SummarizedAutomaton s = summarize_impl(d.cx.m, d.parts, Partition::trivial(d.cx.m.arity),
                                         d.cx.m.initial, d.indep, opt.state_cap);
  Dfa dfa;
  dfa.sigma = s.m.sigma;
  dfa.state_names = s.m.state_names;
  dfa.initial = s.m.initial;
  dfa.delta = s.m.delta;
  dfa.finals.reserve(s.m.state_names.size());
  for (int q = 0; q < s.m.num_states(); ++q)
    dfa.finals.push_back(
        s.m.finals[static_cast<size_t>(s.m.delta_end[static_cast<size_t>(q)])]);
  out.dfa = std::move(dfa);
  return out;
}

// --- recognizability-to-synchronicity reduction ---------------------------------

Mdfa rec_to_sync(const Mdfa& a) {
  require_valid(a, "rec_to_sync");
  int k = a.arity;
  int n = a.num_states();
  Mdfa out;
  out.arity = k;
  out.sigma = a.sigma;
  Sym hash = out.sigma.add(out.sigma.fresh_name("h"));
  Sym turn = out.sigma.add(out.sigma.fresh_name("t"));
  int dead = k + n;
  // States: k prefix loops, then the source machine, then a sink.
  for (int i = 0; i < k; ++i) {
    out.state_names.push_back("pre" + std::to_string(i));
    out.tape_of.push_back(i);
    out.finals.push_back(false);
    std::vector<int> row(static_cast<size_t>(out.sigma.size()), dead);
    row[static_cast<size_t>(hash)] = i;
    row[static_cast<size_t>(turn)] = i + 1 < k ? i + 1 : k + a.initial;
    out.delta.push_back(std::move(row));
    out.delta_end.push_back(dead);
  }
  for (int q = 0; q < n; ++q) {
    out.state_names.push_back(a.state_names[static_cast<size_t>(q)]);
    out.tape_of.push_back(a.tape_of[static_cast<size_t>(q)]);
    out.finals.push_back(a.finals[static_cast<size_t>(q)]);
    std::vector<int> row(static_cast<size_t>(out.sigma.size()), dead);
    for (int c = 0; c < a.sigma.size(); ++c)
      row[static_cast<size_t>(c)] = k + a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
    out.delta.push_back(std::move(row));
    out.delta_end.push_back(k + a.delta_end[static_cast<size_t>(q)]);
  }
  out.state_names.push_back("sink");
  out.tape_of.push_back(0);
  out.finals.push_back(false);
  out.delta.emplace_back(static_cast<size_t>(out.sigma.size()), dead);
  out.delta_end.push_back(dead);
  out.initial = 0;
  return out;
}

KTapeAutomaton rec_to_sync(const KTapeAutomaton& a) {
  require_valid(a, "rec_to_sync");
  int k = a.arity;
  KTapeAutomaton out;
  out.arity = k;
  out.sigma = a.sigma;
  Sym hash = out.sigma.add(out.sigma.fresh_name("h"));
  Sym turn = out.sigma.add(out.sigma.fresh_name("t"));
  for (int i = 0; i < k; ++i) {
    out.state_names.push_back("pre" + std::to_string(i));
    out.finals.push_back(false);
  }
  for (const std::string& s : a.state_names) out.state_names.push_back(s);
  for (bool f : a.finals) out.finals.push_back(f);
  auto unit = [&](int i, Sym c) {
    WordTuple t(static_cast<size_t>(k));
    t[static_cast<size_t>(i)].push_back(c);
    return t;
  };
  for (int i = 0; i < k; ++i) {
    out.transitions.push_back({i, unit(i, hash), i});
    out.transitions.push_back({i, unit(i, turn), i + 1 < k ? i + 1 : k + a.initial});
  }
  for (const auto& t : a.transitions) out.transitions.push_back({k + t.src, t.labels, k + t.dst});
  out.initial = 0;
  return out;
}

}  // namespace relkit
