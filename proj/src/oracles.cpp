#include "relkit/oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace relkit {

// --- tuple enumeration --------------------------------------------------------

namespace {

// All words of exactly length l, lexicographic.
void words_of_length(int nsyms, int l, std::vector<Word>& out) {
  out.clear();
  Word w(static_cast<size_t>(l), 0);
  while (true) {
    out.push_back(w);
    int i = l - 1;
    while (i >= 0 && w[static_cast<size_t>(i)] == nsyms - 1) {
      w[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    w[static_cast<size_t>(i)]++;
  }
}

bool tuple_less(const WordTuple& x, const WordTuple& y) {
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return std::lexicographical_compare(x[i].begin(), x[i].end(),
                                                          y[i].begin(), y[i].end());
  return false;
}

}  // namespace

void for_each_tuple(int k, const Alphabet& sigma, long long bound,
                    const std::function<bool(const WordTuple&)>& visit) {
  if (k == 0) {
    visit({});
    return;
  }
  for (long long n = 0; n <= bound; ++n) {
    // All tuples of total length exactly n, sorted lexicographically.
    std::vector<WordTuple> layer;
    std::vector<int> comp(static_cast<size_t>(k), 0);
    comp[0] = static_cast<int>(n);
    // Enumerate compositions of n into k parts.
    std::function<void(int, int, WordTuple&)> rec = [&](int idx, int rest, WordTuple& acc) {
      if (idx == k - 1) {
        std::vector<Word> ws;
        words_of_length(sigma.size(), rest, ws);
        for (Word& w : ws) {
          acc.push_back(std::move(w));
          layer.push_back(acc);
          acc.pop_back();
        }
        return;
      }
      for (int l = 0; l <= rest; ++l) {
        std::vector<Word> ws;
        words_of_length(sigma.size(), l, ws);
        for (Word& w : ws) {
          acc.push_back(std::move(w));
          rec(idx + 1, rest - l, acc);
          acc.pop_back();
        }
      }
    };
    WordTuple acc;
    rec(0, static_cast<int>(n), acc);
    std::sort(layer.begin(), layer.end(), tuple_less);
    for (const WordTuple& u : layer)
      if (!visit(u)) return;
  }
}

std::vector<WordTuple> enumerate_tuples(int k, const Alphabet& sigma, long long bound) {
  std::vector<WordTuple> out;
  for_each_tuple(k, sigma, bound, [&](const WordTuple& u) {
    out.push_back(u);
    return true;
  });
  return out;
}

namespace {

template <class A, class Member>
std::vector<WordTuple> enumerate_rel(const A& a, int k, long long bound, Member member) {
  std::vector<WordTuple> out;
  for_each_tuple(k, a.sigma, bound, [&](const WordTuple& u) {
    if (member(a, u)) out.push_back(u);
    return true;
  });
  return out;
}

}  // namespace

std::vector<WordTuple> enumerate_relation(const Mdfa& a, long long bound) {
  return enumerate_rel(a, a.arity, bound,
                       [](const Mdfa& m, const WordTuple& u) { return member_det(m, u); });
}
std::vector<WordTuple> enumerate_relation(const KTapeAutomaton& a, long long bound) {
  return enumerate_rel(a, a.arity, bound, [](const KTapeAutomaton& m, const WordTuple& u) {
    return member_nondet(m, u);
  });
}
std::vector<WordTuple> enumerate_relation(const IndependentKTape& a, long long bound) {
  return enumerate_rel(a, a.arity, bound, [](const IndependentKTape& m, const WordTuple& u) {
    return member_independent(m, u);
  });
}

// --- bounded equivalence --------------------------------------------------------
//
// Synchronized two-run search. A configuration holds both machine states,
// which tapes each machine has already closed (consumed the endmarker of),
// and, per tape, the queue of generated symbols the lagging machine has not
// consumed yet. While the first machine runs it is the only generator; the
// second catches up deterministically from the queues. Each input tuple thus
// corresponds to exactly one generation path, so the search is complete up to
// the requested total-length bound without enumerating tuples.

namespace {

struct Cfg {
  int qA, mA, qB, mB;
  std::vector<std::vector<int>> queue;  // per tape; symbols or kEnd
  std::vector<int> lead;                // per tape: 0 none, 1 A leads, 2 B leads
};

std::vector<int> encode(const Cfg& c) {
  std::vector<int> out{c.qA, c.mA, c.qB, c.mB};
  for (size_t t = 0; t < c.queue.size(); ++t) {
    out.push_back(c.lead[t]);
    out.push_back(static_cast<int>(c.queue[t].size()));
    out.insert(out.end(), c.queue[t].begin(), c.queue[t].end());
  }
  return out;
}

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

bool halted(const Mdfa& m, int q, int mask) {
  if (q < 0) return true;  // canonical co-dead marker
  return (mask >> m.tape_of[static_cast<size_t>(q)]) & 1;
}

// alive[q * 2^k + mask]: some accepting completion is reachable from (q, mask).
std::vector<char> alive_table(const Mdfa& m) {
  int k = m.arity;
  int full = (1 << k) - 1;
  size_t n = static_cast<size_t>(m.num_states()) * (1 << k);
  std::vector<char> alive(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < m.num_states(); ++q)
      for (int mask = 0; mask <= full; ++mask) {
        size_t at = static_cast<size_t>(q) * (1 << k) + static_cast<size_t>(mask);
        if (alive[at]) continue;
        int t = m.tape_of[static_cast<size_t>(q)];
        bool ok;
        if ((mask >> t) & 1) {
          ok = mask == full && m.finals[static_cast<size_t>(q)];
        } else {
          ok = alive[static_cast<size_t>(m.step(q, kEnd)) * (1 << k) +
                     static_cast<size_t>(mask | (1 << t))] != 0;
          for (int c = 0; c < m.sigma.size() && !ok; ++c)
            ok = alive[static_cast<size_t>(m.step(q, c)) * (1 << k) +
                       static_cast<size_t>(mask)] != 0;
        }
        if (ok) {
          alive[at] = 1;
          changed = true;
        }
      }
  }
  return alive;
}

// Forced steps: each machine consumes from queues it lags on; queues owned by
// a halted lagger are dropped (it will never consume them). States with no
// accepting completion are collapsed to a canonical marker (-1) — their
// language is empty, so this preserves verdicts and counterexample minimality
// while keeping the configuration space from growing along dead branches.
void closure(Cfg& c, const Mdfa& a, const Mdfa& b, const std::vector<char>& aliveA,
             const std::vector<char>& aliveB) {
  int k = a.arity;
  auto collapse = [&](int& q, int& m, const std::vector<char>& alive) {
    if (q >= 0 && !alive[static_cast<size_t>(q) * (1 << k) + static_cast<size_t>(m)]) {
      q = -1;
      m = (1 << k) - 1;
    }
  };
  collapse(c.qA, c.mA, aliveA);
  collapse(c.qB, c.mB, aliveB);
  bool changed = true;
  while (changed) {
    changed = false;
    if (!halted(a, c.qA, c.mA)) {
      int t = a.tape_of[static_cast<size_t>(c.qA)];
      if (c.lead[static_cast<size_t>(t)] == 2 && !c.queue[static_cast<size_t>(t)].empty()) {
        int s = c.queue[static_cast<size_t>(t)].front();
        c.queue[static_cast<size_t>(t)].erase(c.queue[static_cast<size_t>(t)].begin());
        if (c.queue[static_cast<size_t>(t)].empty()) c.lead[static_cast<size_t>(t)] = 0;
        c.qA = a.step(c.qA, s);
        if (s == kEnd) c.mA |= 1 << t;
        collapse(c.qA, c.mA, aliveA);
        changed = true;
        continue;
      }
    }
    if (!halted(b, c.qB, c.mB)) {
      int t = b.tape_of[static_cast<size_t>(c.qB)];
      if (c.lead[static_cast<size_t>(t)] == 1 && !c.queue[static_cast<size_t>(t)].empty()) {
        int s = c.queue[static_cast<size_t>(t)].front();
        c.queue[static_cast<size_t>(t)].erase(c.queue[static_cast<size_t>(t)].begin());
        if (c.queue[static_cast<size_t>(t)].empty()) c.lead[static_cast<size_t>(t)] = 0;
        c.qB = b.step(c.qB, s);
        if (s == kEnd) c.mB |= 1 << t;
        collapse(c.qB, c.mB, aliveB);
        changed = true;
        continue;
      }
    }
  }
  // Canonicalize: drop queues whose lagger is halted.
  bool hA = halted(a, c.qA, c.mA), hB = halted(b, c.qB, c.mB);
  for (size_t t = 0; t < c.queue.size(); ++t) {
    if ((c.lead[t] == 2 && hA) || (c.lead[t] == 1 && hB)) {
      c.queue[t].clear();
      c.lead[t] = 0;
    }
  }
}

}  // namespace

EquivResult bounded_equiv(const Mdfa& a, const Mdfa& b, std::optional<long long> bound,
                          long long config_cap) {
  if (a.arity != b.arity) throw InputError("bounded_equiv: arity mismatch");
  if (!(a.sigma == b.sigma)) throw InputError("bounded_equiv: alphabet mismatch");
  int k = a.arity;
  int full = (1 << k) - 1;
  long long exact = a.num_states() + b.num_states() - 1;
  long long L = bound ? *bound : exact;
  bool complete = !bound || *bound >= exact;

  struct Node {
    std::vector<int> enc;
    int parent;
    int ev_tape;  // -1 if no generation event
    int ev_sym;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<int>, int, VecHash> visited;
  std::vector<std::vector<int>> bucket(static_cast<size_t>(L) + 2);

  std::vector<char> aliveA = alive_table(a);
  std::vector<char> aliveB = alive_table(b);

  Cfg init{a.initial, 0, b.initial, 0,
           std::vector<std::vector<int>>(static_cast<size_t>(k)),
           std::vector<int>(static_cast<size_t>(k), 0)};
  closure(init, a, b, aliveA, aliveB);
  nodes.push_back({encode(init), -1, -1, 0});
  visited.emplace(nodes[0].enc, 0);
  bucket[0].push_back(0);

  auto decode = [&](const std::vector<int>& enc) {
    Cfg c;
    c.qA = enc[0];
    c.mA = enc[1];
    c.qB = enc[2];
    c.mB = enc[3];
    c.queue.resize(static_cast<size_t>(k));
    c.lead.resize(static_cast<size_t>(k));
    size_t p = 4;
    for (int t = 0; t < k; ++t) {
      c.lead[static_cast<size_t>(t)] = enc[p++];
      int len = enc[p++];
      c.queue[static_cast<size_t>(t)].assign(enc.begin() + static_cast<long>(p),
                                             enc.begin() + static_cast<long>(p) + len);
      p += static_cast<size_t>(len);
    }
    return c;
  };

  auto reconstruct = [&](int node) {
    WordTuple u(static_cast<size_t>(k));
    std::vector<std::pair<int, int>> events;
    for (int i = node; i != -1; i = nodes[static_cast<size_t>(i)].parent)
      if (nodes[static_cast<size_t>(i)].ev_tape >= 0)
        events.push_back({nodes[static_cast<size_t>(i)].ev_tape, nodes[static_cast<size_t>(i)].ev_sym});
    std::reverse(events.begin(), events.end());
    for (auto [t, s] : events)
      if (s != kEnd) u[static_cast<size_t>(t)].push_back(s);
    return u;
  };

  for (long long cost = 0; cost <= L; ++cost) {
    for (size_t bi = 0; bi < bucket[static_cast<size_t>(cost)].size(); ++bi) {
      int id = bucket[static_cast<size_t>(cost)][bi];
      Cfg c = decode(nodes[static_cast<size_t>(id)].enc);
      bool hA = halted(a, c.qA, c.mA), hB = halted(b, c.qB, c.mB);
      if (hA && hB) {
        bool vA = c.qA >= 0 && c.mA == full && a.finals[static_cast<size_t>(c.qA)];
        bool vB = c.qB >= 0 && c.mB == full && b.finals[static_cast<size_t>(c.qB)];
        if (vA != vB) return {false, complete, L, reconstruct(id)};
        continue;
      }
      // The non-halted machine (first machine preferred) generates the next
      // symbol of its demanded tape.
      bool genA = !hA;
      int t = genA ? a.tape_of[static_cast<size_t>(c.qA)] : b.tape_of[static_cast<size_t>(c.qB)];
      std::vector<int> symbols;
      for (int s = 0; s < a.sigma.size(); ++s) symbols.push_back(s);
      symbols.push_back(kEnd);
      for (int s : symbols) {
        long long ncost = cost + (s == kEnd ? 0 : 1);
        if (ncost > L) continue;
        Cfg nc = c;
        if (genA) {
          nc.qA = a.step(nc.qA, s);
          if (s == kEnd) nc.mA |= 1 << t;
          if (!hB) {
            nc.queue[static_cast<size_t>(t)].push_back(s);
            nc.lead[static_cast<size_t>(t)] = 1;
          }
        } else {
          nc.qB = b.step(nc.qB, s);
          if (s == kEnd) nc.mB |= 1 << t;
          if (!hA) {
            nc.queue[static_cast<size_t>(t)].push_back(s);
            nc.lead[static_cast<size_t>(t)] = 2;
          }
        }
        closure(nc, a, b, aliveA, aliveB);
        std::vector<int> enc = encode(nc);
        auto [it, inserted] = visited.emplace(enc, static_cast<int>(nodes.size()));
        if (!inserted) continue;
        if (static_cast<long long>(nodes.size()) >= config_cap)
          throw BudgetError("bounded_equiv: configuration budget exceeded", exact);
        nodes.push_back({std::move(enc), id, t, s});
        bucket[static_cast<size_t>(ncost)].push_back(static_cast<int>(nodes.size()) - 1);
      }
    }
  }
  return {true, complete, L, std::nullopt};
}

// --- congruence index probing -------------------------------------------------

long long index_probe(const std::function<bool(const WordTuple&)>& member, int k,
                      const Alphabet& sigma, int j, long long bound) {
  if (j < 0 || j >= k) throw InputError("index_probe: tape out of range");
  std::vector<WordTuple> contexts = enumerate_tuples(k - 1, sigma, bound);
  std::set<std::vector<bool>> rows;
  for_each_tuple(1, sigma, bound, [&](const WordTuple& xt) {
    std::vector<bool> row;
    row.reserve(contexts.size());
    for (const WordTuple& z : contexts) row.push_back(member(odot({j}, k, xt, z)));
    rows.insert(std::move(row));
    return true;
  });
  return static_cast<long long>(rows.size());
}

long long index_probe(const Mdfa& a, int j, long long bound) {
  return index_probe([&](const WordTuple& u) { return member_det(a, u); }, a.arity, a.sigma,
                     j, bound);
}

long long index_probe(const KTapeAutomaton& a, int j, long long bound) {
  return index_probe([&](const WordTuple& u) { return member_nondet(a, u); }, a.arity,
                     a.sigma, j, bound);
}

// --- lasso evaluation ------------------------------------------------------------

std::vector<UpWord> normalize_upwords(const std::vector<UpWord>& w) {
  if (w.empty()) throw InputError("normalize_upwords: empty tuple");
  size_t P = 0;
  long long L = 1;
  for (const UpWord& u : w) {
    if (u.period.empty()) throw InputError("ultimately periodic word needs a nonempty period");
    P = std::max(P, u.prefix.size());
    L = std::lcm(L, static_cast<long long>(u.period.size()));
    if (L > 1'000'000) throw BudgetError("normalize_upwords: period lcm too large", L);
  }
  std::vector<UpWord> out;
  for (const UpWord& u : w) {
    UpWord v;
    v.prefix = u.prefix;
    size_t rot = 0;
    while (v.prefix.size() < P) {
      v.prefix.push_back(u.period[rot % u.period.size()]);
      ++rot;
    }
    Word rotated;
    for (size_t i = 0; i < u.period.size(); ++i)
      rotated.push_back(u.period[(rot + i) % u.period.size()]);
    while (v.period.size() < static_cast<size_t>(L))
      v.period.insert(v.period.end(), rotated.begin(), rotated.end());
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

TupleLetter lasso_letter(const std::vector<UpWord>& w, size_t pos, size_t P) {
  TupleLetter l;
  for (const UpWord& u : w)
    l.push_back(pos < P ? u.prefix[pos] : u.period[pos - P]);
  return l;
}

}  // namespace

bool member_upword(const Nba& b, const std::vector<UpWord>& win) {
  if (static_cast<int>(win.size()) != b.width) throw InputError("member_upword: width mismatch");
  std::vector<UpWord> w = normalize_upwords(win);
  size_t P = w[0].prefix.size(), L = w[0].period.size();
  size_t total = P + L;
  auto node = [&](int q, size_t pos) {
    return static_cast<int>(static_cast<size_t>(q) * total + pos);
  };
  std::vector<std::vector<const Nba::Trans*>> from(static_cast<size_t>(b.num_states()));
  for (const auto& t : b.transitions) from[static_cast<size_t>(t.src)].push_back(&t);
  // Reachable product graph (state, position in the lasso).
  std::vector<bool> reach(static_cast<size_t>(b.num_states()) * total, false);
  std::vector<std::vector<int>> succ(reach.size());
  std::deque<int> bfs{node(b.initial, 0)};
  reach[static_cast<size_t>(node(b.initial, 0))] = true;
  while (!bfs.empty()) {
    int n = bfs.front();
    bfs.pop_front();
    int q = n / static_cast<int>(total);
    size_t pos = static_cast<size_t>(n) % total;
    TupleLetter l = lasso_letter(w, pos, P);
    size_t npos = pos + 1 == total ? P : pos + 1;
    for (const auto* t : from[static_cast<size_t>(q)]) {
      if (t->letter != l) continue;
      int m = node(t->dst, npos);
      succ[static_cast<size_t>(n)].push_back(m);
      if (!reach[static_cast<size_t>(m)]) {
        reach[static_cast<size_t>(m)] = true;
        bfs.push_back(m);
      }
    }
  }
  SccInfo scc = strongly_connected(succ);
  std::vector<int> size(static_cast<size_t>(scc.count), 0);
  std::vector<bool> has_self(static_cast<size_t>(scc.count), false);
  for (size_t n = 0; n < succ.size(); ++n) {
    if (!reach[n]) continue;
    size[static_cast<size_t>(scc.comp[n])]++;
    for (int m : succ[n])
      if (m == static_cast<int>(n)) has_self[static_cast<size_t>(scc.comp[n])] = true;
  }
  // Within one SCC of the reachable product every node can reach every other,
  // so a cyclic SCC containing an accepting-state node yields an accepting run.
  for (size_t n = 0; n < succ.size(); ++n) {
    if (!reach[n]) continue;
    int q = static_cast<int>(n) / static_cast<int>(total);
    int cmp = scc.comp[n];
    if (b.accepting[static_cast<size_t>(q)] &&
        (size[static_cast<size_t>(cmp)] > 1 || has_self[static_cast<size_t>(cmp)]))
      return true;
  }
  return false;
}

bool member_upword(const Dpa& d, const std::vector<UpWord>& win) {
  if (static_cast<int>(win.size()) != d.width) throw InputError("member_upword: width mismatch");
  std::vector<UpWord> w = normalize_upwords(win);
  size_t P = w[0].prefix.size(), L = w[0].period.size();
  size_t total = P + L;
  std::map<std::pair<int, size_t>, size_t> first_seen;
  std::vector<int> prios;
  int q = d.initial;
  size_t pos = 0;
  while (true) {
    auto key = std::make_pair(q, pos);
    auto it = first_seen.find(key);
    if (it != first_seen.end()) {
      int best = 1 << 30;
      for (size_t i = it->second; i < prios.size(); ++i) best = std::min(best, prios[i]);
      return best % 2 == 0;
    }
    first_seen[key] = prios.size();
    prios.push_back(d.priority[static_cast<size_t>(q)]);
    q = d.delta[static_cast<size_t>(q)][static_cast<size_t>(d.letter_index(lasso_letter(w, pos, P)))];
    pos = pos + 1 == total ? P : pos + 1;
  }
}

}  // namespace relkit
