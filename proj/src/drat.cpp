#include "relkit/drat.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "relkit/equiv.hpp"
#include "relkit/oracles.hpp"

namespace relkit {

namespace {

// --- plain-view helpers -------------------------------------------------------

// Endpoint of the demand-driven run from q consuming exactly u, if it exists.
std::optional<int> plain_run(const PlainDet& p, int q, const WordTuple& u) {
  std::vector<size_t> pos(static_cast<size_t>(p.arity), 0);
  int cur = q;
  for (;;) {
    int t = p.tape_of[static_cast<size_t>(cur)];
    size_t& i = pos[static_cast<size_t>(t)];
    if (i >= u[static_cast<size_t>(t)].size()) break;
    cur = p.delta[static_cast<size_t>(cur)]
                 [static_cast<size_t>(u[static_cast<size_t>(t)][i++])];
  }
  for (int t = 0; t < p.arity; ++t)
    if (pos[static_cast<size_t>(t)] < u[static_cast<size_t>(t)].size())
      return std::nullopt;
  return cur;
}

std::vector<bool> reachable_states(const PlainDet& p) {
  std::vector<bool> seen(static_cast<size_t>(p.num_states()), false);
  std::deque<int> bfs{p.initial};
  seen[static_cast<size_t>(p.initial)] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    for (int d : p.delta[static_cast<size_t>(q)])
      if (!seen[static_cast<size_t>(d)]) {
        seen[static_cast<size_t>(d)] = true;
        bfs.push_back(d);
      }
  }
  return seen;
}

std::vector<bool> cyclic_states(const std::vector<std::vector<int>>& succ) {
  SccInfo scc = strongly_connected(succ);
  std::vector<int> size(static_cast<size_t>(scc.count), 0);
  for (int c : scc.comp) ++size[static_cast<size_t>(c)];
  std::vector<bool> out(succ.size(), false);
  for (size_t q = 0; q < succ.size(); ++q) {
    if (size[static_cast<size_t>(scc.comp[q])] > 1) {
      out[q] = true;
      continue;
    }
    for (int d : succ[q])
      if (d == static_cast<int>(q)) out[q] = true;
  }
  return out;
}

// States lying on some cycle of the full transition graph.
std::vector<bool> on_cycle(const PlainDet& p) {
  std::vector<std::vector<int>> succ(static_cast<size_t>(p.num_states()));
  for (size_t q = 0; q < succ.size(); ++q)
    for (int d : p.delta[q]) succ[q].push_back(d);
  return cyclic_states(succ);
}

// Front-tape states lying on a cycle that passes through front-tape states
// only (a run consuming letters on the front tape alone).
std::vector<bool> on_front_cycle(const PlainDet& p) {
  std::vector<std::vector<int>> succ(static_cast<size_t>(p.num_states()));
  for (size_t q = 0; q < succ.size(); ++q) {
    if (p.tape_of[q] != 0) continue;
    for (int d : p.delta[q])
      if (p.tape_of[static_cast<size_t>(d)] == 0) succ[q].push_back(d);
  }
  return cyclic_states(succ);
}

WordTuple with_front(int k, const Word& front, const WordTuple& rest) {
  WordTuple u(static_cast<size_t>(k));
  u[0] = front;
  for (int t = 1; t < k; ++t) u[static_cast<size_t>(t)] = rest[static_cast<size_t>(t - 1)];
  return u;
}

bool witness_valid_plain(const PlainDet& p, const NonRecWitness& w) {
  const int m = p.num_states();
  const int k = p.arity;
  const int g = p.gamma.size();
  if (w.q < 0 || w.q >= m || w.r < 0 || w.r >= m) return false;
  if (w.v1.empty()) return false;
  if (static_cast<int>(w.v2.size()) != k - 1 || static_cast<int>(w.x.size()) != k - 1 ||
      static_cast<int>(w.y.size()) != k - 1)
    return false;
  auto ok_word = [g](const Word& u) {
    for (Sym c : u)
      if (c < 0 || c >= g) return false;
    return true;
  };
  if (!ok_word(w.v1) || !ok_word(w.w1)) return false;
  for (int t = 0; t < k - 1; ++t)
    if (!ok_word(w.v2[static_cast<size_t>(t)]) || !ok_word(w.x[static_cast<size_t>(t)]) ||
        !ok_word(w.y[static_cast<size_t>(t)]))
      return false;
  if (!reachable_states(p)[static_cast<size_t>(w.q)]) return false;
  WordTuple eps(static_cast<size_t>(k - 1));
  if (plain_run(p, w.q, with_front(k, w.v1, w.v2)) != std::optional<int>(w.q)) return false;
  if (plain_run(p, w.q, with_front(k, w.v1, w.x)) != std::optional<int>(w.r)) return false;
  if (plain_run(p, w.r, with_front(k, w.v1, eps)) != std::optional<int>(w.r)) return false;
  WordTuple xy(static_cast<size_t>(k - 1));
  for (int t = 0; t < k - 1; ++t) {
    xy[static_cast<size_t>(t)] = w.x[static_cast<size_t>(t)];
    const Word& yt = w.y[static_cast<size_t>(t)];
    xy[static_cast<size_t>(t)].insert(xy[static_cast<size_t>(t)].end(), yt.begin(), yt.end());
  }
  bool in_q = member_plain_from(p, w.q, with_front(k, w.w1, xy));
  bool in_r = member_plain_from(p, w.r, with_front(k, w.w1, w.y));
  return in_q != in_r;
}

// --- the two-tape encoding ----------------------------------------------------

enum ShufflePhase {
  PH_Q,     // expect the q state letter on tape 0
  PH_R,     // expect the r state letter on tape 0
  SP_G,     // inside a g block on tape 1
  SP_H,     // inside an h block on tape 1
  SP_A,     // expect one cycle letter a_i on tape 1
  SP_D,     // expect the dia separator after a_i
  SP_Y,     // after mark: y letters on tape 1
  PH_WREST, // tape 1 ended, remainder of w1 on tape 0
  PH_DONE,
};
// Key slots: 0 phase, 1 q, 2 r, 3 pi, 4 rho, 5 s3, 6 sim, 7 w1done, 8 seen_a.

// --- the k-ary encoding -------------------------------------------------------

enum KaryPhase {
  KQ,  // expect the q state letter on tape 0
  KS,  // expect the next spelled run state on tape 0
  KG,  // expect a run letter or the mark on tape 0
  KW,  // after mark: w1 on tape 0, data tapes on demand
};
// Key slots: 0 phase, 1 q, 2 run state, 3 NT-DFA state, 4 sim, 5 ended mask.

struct ShuffleParse {
  int q = 0, r = 0;
  Word v1, w1, v2, x, y;
};

// Parses an encoded pair per the ShuffleEncoding layout; nullopt when the
// rhythm or the letter classes are off.
std::optional<ShuffleParse> parse_shuffle(const ShuffleEncoding& enc, int plain_letters,
                                          const WordTuple& u) {
  if (u.size() != 2) return std::nullopt;
  const int g = plain_letters;
  const int m = static_cast<int>(enc.state_letter.size());
  auto st = [&](Sym c) { return (c >= g && c < g + m) ? c - g : -1; };
  auto pl = [&](Sym c) { return c >= 0 && c < g; };
  ShuffleParse out;
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
  auto block = [&](Word& into) {
    while (i < t1.size() && pl(t1[i])) into.push_back(t1[i++]);
  };
  block(out.v2);  // g0
  if (i >= t1.size() || t1[i] != enc.dia) return std::nullopt;
  ++i;
  block(out.x);  // h0
  for (;;) {
    if (i >= t1.size()) return std::nullopt;
    if (t1[i] == enc.mark) {
      ++i;
      break;
    }
    if (t1[i] != enc.dia) return std::nullopt;
    ++i;
    if (i >= t1.size() || !pl(t1[i])) return std::nullopt;
    out.v1.push_back(t1[i++]);  // a_i
    block(out.v2);              // g_i
    if (i >= t1.size() || t1[i] != enc.dia) return std::nullopt;
    ++i;
    block(out.x);  // h_i
  }
  for (; i < t1.size(); ++i) {
    if (!pl(t1[i])) return std::nullopt;
    out.y.push_back(t1[i]);
  }
  if (out.v1.empty()) return std::nullopt;
  return out;
}

std::optional<NonRecWitness> decode_shuffle(const PlainDet& p, const ShuffleEncoding& enc,
                                            const WordTuple& ce) {
  auto parsed = parse_shuffle(enc, p.gamma.size(), ce);
  if (!parsed) return std::nullopt;
  NonRecWitness w;
  w.q = parsed->q;
  w.r = parsed->r;
  w.v1 = parsed->v1;
  w.w1 = parsed->w1;
  w.v2 = {parsed->v2};
  w.x = {parsed->x};
  w.y = {parsed->y};
  if (!witness_valid_plain(p, w)) return std::nullopt;
  return w;
}

std::optional<NonRecWitness> decode_kary(const PlainDet& p, const KaryEncoding& enc,
                                         const WordTuple& ce) {
  const int k = p.arity;
  const int g = p.gamma.size();
  const int m = p.num_states();
  if (static_cast<int>(ce.size()) != k) return std::nullopt;
  auto st = [&](Sym c) { return (c >= g && c < g + m) ? c - g : -1; };
  auto pl = [&](Sym c) { return c >= 0 && c < g; };

  // Parse tape 0: q^ s_0 c_1 s_1 .. c_n s_n mark w1.
  const Word& t0 = ce[0];
  size_t i = 0;
  if (i >= t0.size()) return std::nullopt;
  int q = st(t0[i++]);
  if (q < 0 || i >= t0.size() || st(t0[i]) != q) return std::nullopt;
  int cur = q;
  ++i;
  Word v1;
  WordTuple vrest(static_cast<size_t>(k - 1));
  for (;;) {
    if (i >= t0.size()) return std::nullopt;
    if (t0[i] == enc.mark) {
      ++i;
      break;
    }
    if (!pl(t0[i])) return std::nullopt;
    Sym c = t0[i++];
    int tape = p.tape_of[static_cast<size_t>(cur)];
    if (tape == 0)
      v1.push_back(c);
    else
      vrest[static_cast<size_t>(tape - 1)].push_back(c);
    cur = p.delta[static_cast<size_t>(cur)][static_cast<size_t>(c)];
    if (i >= t0.size() || st(t0[i]) != cur) return std::nullopt;
    ++i;
  }
  if (cur != q || v1.empty()) return std::nullopt;
  Word w1;
  for (; i < t0.size(); ++i) {
    if (!pl(t0[i])) return std::nullopt;
    w1.push_back(t0[i]);
  }
  WordTuple wrest(static_cast<size_t>(k - 1));
  for (int t = 1; t < k; ++t) wrest[static_cast<size_t>(t - 1)] = ce[static_cast<size_t>(t)];

  // Simulate from q on (v1^blocks . w1, wrest). A data-tape consumption at
  // front progress pos ruins the block whose letters it interrupts, block
  // (pos-1)/|v1|; a block that survives untouched yields a state with a
  // front-only v1 loop by null-transparency.
  long long rest_len = tuple_len(wrest);
  const int blocks = static_cast<int>(rest_len) + 2;
  const int len = static_cast<int>(v1.size());
  std::vector<char> ruined(static_cast<size_t>(blocks), 0);
  std::vector<int> after(static_cast<size_t>(blocks) + 1, -1);
  std::vector<std::vector<size_t>> consumed_at(static_cast<size_t>(blocks) + 1);
  after[0] = q;
  std::vector<size_t> pos(static_cast<size_t>(k), 0);
  consumed_at[0] = pos;
  const long long front_total = static_cast<long long>(blocks) * len + static_cast<long long>(w1.size());
  int state = q;
  long long pos0 = 0;
  for (;;) {
    int tape = p.tape_of[static_cast<size_t>(state)];
    Sym c;
    if (tape == 0) {
      if (pos0 >= front_total) break;
      long long idx = pos0 % len;
      c = pos0 < static_cast<long long>(blocks) * len
              ? v1[static_cast<size_t>(idx)]
              : w1[static_cast<size_t>(pos0 - static_cast<long long>(blocks) * len)];
      ++pos0;
    } else {
      size_t& ptr = pos[static_cast<size_t>(tape)];
      if (ptr >= wrest[static_cast<size_t>(tape - 1)].size()) break;
      c = wrest[static_cast<size_t>(tape - 1)][ptr++];
      if (pos0 >= 1 && pos0 <= static_cast<long long>(blocks) * len)
        ruined[static_cast<size_t>((pos0 - 1) / len)] = 1;
    }
    state = p.delta[static_cast<size_t>(state)][static_cast<size_t>(c)];
    if (tape == 0 && pos0 % len == 0 && pos0 / len <= blocks && pos0 <= static_cast<long long>(blocks) * len) {
      after[static_cast<size_t>(pos0 / len)] = state;
      pos[0] = 0;
      consumed_at[static_cast<size_t>(pos0 / len)] = pos;
    }
  }
  for (int b = 0; b < blocks; ++b) {
    int rr = after[static_cast<size_t>(b) + 1];
    if (ruined[static_cast<size_t>(b)] || rr < 0 || p.tape_of[static_cast<size_t>(rr)] != 0)
      continue;
    NonRecWitness w;
    w.q = q;
    w.r = rr;
    w.v1.clear();
    w.v2.assign(static_cast<size_t>(k - 1), {});
    for (int rep = 0; rep <= b; ++rep) {
      w.v1.insert(w.v1.end(), v1.begin(), v1.end());
      for (int t = 0; t < k - 1; ++t)
        w.v2[static_cast<size_t>(t)].insert(w.v2[static_cast<size_t>(t)].end(),
                                            vrest[static_cast<size_t>(t)].begin(),
                                            vrest[static_cast<size_t>(t)].end());
    }
    w.x.assign(static_cast<size_t>(k - 1), {});
    w.y.assign(static_cast<size_t>(k - 1), {});
    const std::vector<size_t>& cut = consumed_at[static_cast<size_t>(b) + 1];
    for (int t = 1; t < k; ++t) {
      const Word& wt = wrest[static_cast<size_t>(t - 1)];
      size_t split = cut[static_cast<size_t>(t)];
      w.x[static_cast<size_t>(t - 1)].assign(wt.begin(), wt.begin() + static_cast<long>(split));
      w.y[static_cast<size_t>(t - 1)].assign(wt.begin() + static_cast<long>(split), wt.end());
    }
    // One of w1 and v1.w1 must separate R_q from R_r, because the encoded
    // pair was accepted by exactly one of p1, p2.
    for (int variant = 0; variant < 2; ++variant) {
      w.w1 = w1;
      if (variant == 1) w.w1.insert(w.w1.begin(), v1.begin(), v1.end());
      if (witness_valid_plain(p, w)) return w;
    }
  }
  return std::nullopt;
}

// --- direct pattern search ----------------------------------------------------

// Up to `want` data-tape label tuples of runs start ->(v1, labels)-> target,
// shortest first, with total label length <= lencap.
std::vector<WordTuple> side_labels(const PlainDet& p, const Word& v1, int start, int target,
                                   int want, long long lencap) {
  const int k = p.arity;
  const int m = p.num_states();
  const int layers = static_cast<int>(v1.size()) + 1;
  // Layered co-reachability of (|v1|, target).
  std::vector<char> cor(static_cast<size_t>(layers) * m, 0);
  cor[static_cast<size_t>(layers - 1) * m + target] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = layers - 1; i >= 0; --i)
      for (int s = 0; s < m; ++s) {
        size_t at = static_cast<size_t>(i) * m + s;
        if (cor[at]) continue;
        bool hit = false;
        if (p.tape_of[static_cast<size_t>(s)] == 0) {
          if (i + 1 < layers)
            hit = cor[static_cast<size_t>(i + 1) * m +
                      p.delta[static_cast<size_t>(s)][static_cast<size_t>(v1[static_cast<size_t>(i)])]]
                      != 0;
        } else {
          for (int d : p.delta[static_cast<size_t>(s)])
            if (cor[static_cast<size_t>(i) * m + d]) {
              hit = true;
              break;
            }
        }
        if (hit) {
          cor[at] = 1;
          changed = true;
        }
      }
  }
  std::vector<WordTuple> found;
  if (!cor[static_cast<size_t>(start)]) return found;
  struct Cfg {
    int layer, state;
    WordTuple labels;
  };
  std::deque<Cfg> bfs{{0, start, WordTuple(static_cast<size_t>(k - 1))}};
  std::set<std::pair<std::pair<int, int>, WordTuple>> seen{
      {{0, start}, WordTuple(static_cast<size_t>(k - 1))}};
  long long expansions = 0;
  while (!bfs.empty() && static_cast<int>(found.size()) < want && expansions < 20000) {
    Cfg c = std::move(bfs.front());
    bfs.pop_front();
    ++expansions;
    if (c.layer == layers - 1 && c.state == target) {
      found.push_back(c.labels);
      continue;
    }
    int tape = p.tape_of[static_cast<size_t>(c.state)];
    if (tape == 0) {
      if (c.layer + 1 >= layers) continue;
      int d = p.delta[static_cast<size_t>(c.state)]
                     [static_cast<size_t>(v1[static_cast<size_t>(c.layer)])];
      if (!cor[static_cast<size_t>(c.layer + 1) * m + d]) continue;
      Cfg n{c.layer + 1, d, c.labels};
      if (seen.insert({{n.layer, n.state}, n.labels}).second) bfs.push_back(std::move(n));
    } else {
      if (tuple_len(c.labels) >= lencap) continue;
      for (int ch = 0; ch < p.gamma.size(); ++ch) {
        int d = p.delta[static_cast<size_t>(c.state)][static_cast<size_t>(ch)];
        if (!cor[static_cast<size_t>(c.layer) * m + d]) continue;
        Cfg n{c.layer, d, c.labels};
        n.labels[static_cast<size_t>(tape - 1)].push_back(ch);
        if (seen.insert({{n.layer, n.state}, n.labels}).second) bfs.push_back(std::move(n));
      }
    }
  }
  return found;
}

std::optional<NonRecWitness> pattern_search(const PlainDet& p, const RecOptions& opt) {
  const int m = p.num_states();
  const int k = p.arity;
  const int g = p.gamma.size();
  std::vector<bool> qc = on_cycle(p);
  std::vector<bool> rc = on_front_cycle(p);
  std::vector<bool> reach = reachable_states(p);

  std::vector<WordTuple> scan;
  for_each_tuple(k, p.gamma, opt.search_sep_bound, [&](const WordTuple& u) {
    scan.push_back(u);
    return static_cast<long long>(scan.size()) < opt.search_tuple_cap;
  });

  std::map<int, Mdfa> wrapcache;
  auto wrap = [&](int s) -> const Mdfa& {
    auto it = wrapcache.find(s);
    if (it == wrapcache.end()) it = wrapcache.emplace(s, endmark_wrap(p, s)).first;
    return it->second;
  };

  auto separate = [&](int q, int r, const WordTuple& xbar) -> std::optional<WordTuple> {
    WordTuple probe(static_cast<size_t>(k));
    for (const WordTuple& wy : scan) {
      probe[0] = wy[0];
      for (int t = 1; t < k; ++t) {
        probe[static_cast<size_t>(t)] = xbar[static_cast<size_t>(t - 1)];
        const Word& yt = wy[static_cast<size_t>(t)];
        probe[static_cast<size_t>(t)].insert(probe[static_cast<size_t>(t)].end(), yt.begin(),
                                             yt.end());
      }
      if (member_plain_from(p, q, probe) != member_plain_from(p, r, wy)) return wy;
    }
    // Machine-level fallback: compare { (w1, yrest) : (w1, xbar.yrest) in R_q }
    // against R_r directly.
    Mdfa m1 = wrap(q);
    for (int t = 1; t < k; ++t)
      if (!xbar[static_cast<size_t>(t - 1)].empty())
        m1 = residual_prefix(m1, t, xbar[static_cast<size_t>(t - 1)]);
    try {
      EquivResult er = bounded_equiv(m1, wrap(r), opt.sep_equiv_bound, opt.sep_equiv_config_cap);
      if (!er.equal && er.counterexample) return *er.counterexample;
    } catch (const BudgetError&) {
    }
    return std::nullopt;
  };

  long long tried = 0;
  for (int q = 0; q < m; ++q) {
    if (!qc[q] || !reach[q] || q == p.dead) continue;
    // Subset graph: states reachable from q by runs whose front-tape word is
    // a given v1-prefix (data-tape letters closed over).
    auto closure = [&](std::vector<char> s) {
      std::deque<int> work;
      for (int i = 0; i < m; ++i)
        if (s[static_cast<size_t>(i)]) work.push_back(i);
      while (!work.empty()) {
        int u = work.front();
        work.pop_front();
        if (p.tape_of[static_cast<size_t>(u)] == 0) continue;
        for (int d : p.delta[static_cast<size_t>(u)])
          if (!s[static_cast<size_t>(d)]) {
            s[static_cast<size_t>(d)] = 1;
            work.push_back(d);
          }
      }
      return s;
    };
    std::map<std::vector<char>, int> node_id;
    std::vector<std::vector<char>> sets;
    std::vector<std::vector<int>> edge;          // per node, per front letter
    std::vector<char> start(static_cast<size_t>(m), 0);
    start[static_cast<size_t>(q)] = 1;
    sets.push_back(closure(std::move(start)));
    node_id.emplace(sets[0], 0);
    for (size_t n = 0; n < sets.size() && sets.size() < 3000; ++n) {
      edge.emplace_back(static_cast<size_t>(g - 1), -1);
      for (int c = 0; c + 1 < g; ++c) {  // front-tape cycle letters skip the end mark
        std::vector<char> nxt(static_cast<size_t>(m), 0);
        bool any = false;
        for (int s = 0; s < m; ++s)
          if (sets[n][static_cast<size_t>(s)] && p.tape_of[static_cast<size_t>(s)] == 0) {
            nxt[static_cast<size_t>(p.delta[static_cast<size_t>(s)][static_cast<size_t>(c)])] = 1;
            any = true;
          }
        if (!any) continue;
        nxt = closure(std::move(nxt));
        auto [it, fresh] = node_id.emplace(nxt, static_cast<int>(sets.size()));
        if (fresh) sets.push_back(std::move(nxt));
        edge[n][static_cast<size_t>(c)] = it->second;
      }
    }
    while (edge.size() < sets.size()) edge.emplace_back(static_cast<size_t>(g - 1), -1);

    for (int r = 0; r < m; ++r) {
      if (!rc[r] || p.tape_of[static_cast<size_t>(r)] != 0) continue;
      // Product with r's deterministic front-only cycle run; a hit is a
      // nonempty v1 with q, r both reachable and r's run back at r.
      std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> parent;
      std::deque<std::pair<int, int>> bfs{{0, r}};
      parent[{0, r}] = {{-1, -1}, -1};
      std::vector<Word> v1s;
      while (!bfs.empty() && static_cast<int>(v1s.size()) < opt.search_v1_cap) {
        auto [n, s3] = bfs.front();
        bfs.pop_front();
        bool hit = parent[{n, s3}].second >= 0 && s3 == r &&
                   sets[static_cast<size_t>(n)][static_cast<size_t>(q)] &&
                   sets[static_cast<size_t>(n)][static_cast<size_t>(r)];
        if (hit) {
          Word v1;
          for (std::pair<int, int> at = {n, s3}; parent[at].second >= 0; at = parent[at].first)
            v1.push_back(parent[at].second);
          std::reverse(v1.begin(), v1.end());
          v1s.push_back(std::move(v1));
        }
        for (int c = 0; c + 1 < g; ++c) {
          int n2 = edge[static_cast<size_t>(n)][static_cast<size_t>(c)];
          if (n2 < 0) continue;
          if (p.tape_of[static_cast<size_t>(s3)] != 0) continue;
          int s32 = p.delta[static_cast<size_t>(s3)][static_cast<size_t>(c)];
          if (p.tape_of[static_cast<size_t>(s32)] != 0) continue;
          if (parent.emplace(std::pair<int, int>{n2, s32},
                             std::pair<std::pair<int, int>, int>{{n, s3}, c})
                  .second)
            bfs.push_back({n2, s32});
        }
      }
      for (const Word& v1 : v1s) {
        std::vector<WordTuple> v2s = side_labels(p, v1, q, q, 1, opt.search_sep_bound);
        if (v2s.empty()) continue;
        std::vector<WordTuple> xs =
            side_labels(p, v1, q, r, opt.search_x_cap, opt.search_sep_bound);
        for (const WordTuple& xbar : xs) {
          if (++tried > opt.search_pair_cap) return std::nullopt;
          std::optional<WordTuple> sep = separate(q, r, xbar);
          if (!sep) continue;
          NonRecWitness w;
          w.q = q;
          w.r = r;
          w.v1 = v1;
          w.v2 = v2s[0];
          w.x = xbar;
          w.w1 = (*sep)[0];
          w.y.assign(sep->begin() + 1, sep->end());
          if (witness_valid_plain(p, w)) return w;
        }
      }
    }
  }
  return std::nullopt;
}

// --- right-congruence exploration ----------------------------------------------

struct ClassExp {
  std::vector<Word> reps;
  std::vector<std::vector<int>> delta;
};

// Nerode-style exploration of the tape-j right congruence; nullopt when more
// than class_cap classes appear or a representative outgrows len_cap.
std::optional<ClassExp> explore_classes(const Mdfa& a, int j, long long class_cap,
                                        long long len_cap) {
  const int ns = a.sigma.size();
  const long long sig_bound = ns <= 2 ? 6 : 4;
  ClassExp e;
  std::vector<Mdfa> res;
  std::map<std::vector<WordTuple>, std::vector<int>> buckets;
  e.reps.push_back({});
  res.push_back(residual_prefix(a, j, {}));
  buckets[enumerate_relation(res[0], sig_bound)].push_back(0);
  for (size_t i = 0; i < e.reps.size(); ++i) {
    e.delta.emplace_back(static_cast<size_t>(ns), -1);
    for (int c = 0; c < ns; ++c) {
      Word u = e.reps[i];
      u.push_back(c);
      Mdfa ru = residual_prefix(a, j, u);
      std::vector<WordTuple> sig = enumerate_relation(ru, sig_bound);
      int hit = -1;
      for (int cand : buckets[sig])
        if (bounded_equiv(res[static_cast<size_t>(cand)], ru).equal) {
          hit = cand;
          break;
        }
      if (hit < 0) {
        if (static_cast<long long>(e.reps.size()) >= class_cap ||
            static_cast<long long>(u.size()) > len_cap)
          return std::nullopt;
        hit = static_cast<int>(e.reps.size());
        e.reps.push_back(std::move(u));
        res.push_back(std::move(ru));
        buckets[sig].push_back(hit);
      }
      e.delta[i][static_cast<size_t>(c)] = hit;
    }
  }
  return e;
}

// --- encoding-based hunts -------------------------------------------------------

std::optional<NonRecWitness> hunt_with_equiv(const Mdfa& c1, const Mdfa& c2,
                                             const RecOptions& opt,
                                             const std::function<std::optional<NonRecWitness>(
                                                 const WordTuple&)>& decode) {
  for (int ord = 0; ord < 2; ++ord) {
    try {
      EquivResult er = ord == 0 ? bounded_equiv(c1, c2, opt.equiv_bound, opt.equiv_config_cap)
                                : bounded_equiv(c2, c1, opt.equiv_bound, opt.equiv_config_cap);
      if (!er.equal && er.counterexample) return decode(*er.counterexample);
      return std::nullopt;  // bound covered with no difference
    } catch (const BudgetError&) {
      // retry with the machines swapped; the generated-symbol queues can be
      // far smaller in one direction than the other
    }
  }
  return std::nullopt;
}

}  // namespace

Mdfa drat_view(const Mdfa& a, int j) {
  if (j < 0 || j >= a.arity) throw InputError("drat_view: tape out of range");
  std::vector<int> perm{j};
  for (int t = 0; t < a.arity; ++t)
    if (t != j) perm.push_back(t);
  return permute_tapes(a, perm);
}

Dfa null_transparent_dfa(const Mdfa& a, long long state_cap) {
  const int ns = a.sigma.size();
  std::vector<int> front;  // front-tape states
  std::vector<int> idx(static_cast<size_t>(a.num_states()), -1);
  for (int q = 0; q < a.num_states(); ++q)
    if (a.tape_of[static_cast<size_t>(q)] == 0) {
      idx[static_cast<size_t>(q)] = static_cast<int>(front.size());
      front.push_back(q);
    }
  const size_t nf = front.size();
  // Key: run endpoints from each front state (-1 undefined), then a nonempty
  // flag. The empty word is rejected via the flag.
  std::vector<int> init(nf + 1);
  for (size_t i = 0; i < nf; ++i) init[i] = front[i];
  init[nf] = 0;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> keys{init};
  ids.emplace(init, 0);
  Dfa d;
  d.sigma = a.sigma;
  for (size_t at = 0; at < keys.size(); ++at) {
    d.state_names.push_back("f" + std::to_string(at));
    d.delta.emplace_back(static_cast<size_t>(ns), -1);
    const std::vector<int> cur = keys[at];
    bool fin = cur[nf] != 0;
    for (size_t i = 0; fin && i < nf; ++i) {
      int t = cur[i];
      if (t < 0 || a.tape_of[static_cast<size_t>(t)] != 0) continue;
      if (cur[static_cast<size_t>(idx[static_cast<size_t>(t)])] != t) fin = false;
    }
    d.finals.push_back(fin);
    for (int c = 0; c < ns; ++c) {
      std::vector<int> nxt(nf + 1, -1);
      nxt[nf] = 1;
      for (size_t i = 0; i < nf; ++i) {
        int t = cur[i];
        if (t >= 0 && a.tape_of[static_cast<size_t>(t)] == 0)
          nxt[i] = a.delta[static_cast<size_t>(t)][static_cast<size_t>(c)];
      }
      auto [it, fresh] = ids.emplace(nxt, static_cast<int>(keys.size()));
      if (fresh) {
        if (static_cast<long long>(keys.size()) >= state_cap)
          throw BudgetError("null_transparent_dfa: state cap exceeded", state_cap);
        keys.push_back(std::move(nxt));
      }
      d.delta[at][static_cast<size_t>(c)] = it->second;
    }
  }
  d.initial = 0;
  return d;
}

ShuffleEncoding shuffle_encode(const Mdfa& a, long long state_cap) {
  if (a.arity != 2) throw InputError("shuffle_encode: arity 2 required");
  PlainDet p = make_plain(a);
  const int m = p.num_states();
  const int g = p.gamma.size();
  std::vector<bool> qc = on_cycle(p);
  std::vector<bool> reach = reachable_states(p);
  for (int i = 0; i < m; ++i) qc[static_cast<size_t>(i)] = qc[static_cast<size_t>(i)] && reach[static_cast<size_t>(i)];
  std::vector<bool> rc = on_front_cycle(p);

  ShuffleEncoding enc;
  enc.letters = p.gamma;
  enc.state_letter.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    enc.state_letter[static_cast<size_t>(i)] = enc.letters.add(enc.letters.fresh_name("s" + std::to_string(i)));
  enc.dia = enc.letters.add(enc.letters.fresh_name("dia"));
  enc.mark = enc.letters.add(enc.letters.fresh_name("mark"));

  auto build = [&](bool feed_h) {
    DetBuild b;
    b.arity = 2;
    b.sigma = enc.letters;
    b.owner = [&p](const std::vector<int>& k) {
      switch (k[0]) {
        case PH_Q:
        case PH_R:
        case PH_WREST:
        case PH_DONE:
          return 0;
        default:
          return (!k[7] && p.tape_of[static_cast<size_t>(k[6])] == 0) ? 0 : 1;
      }
    };
    b.step = [&p, &enc, &qc, &rc, m, g, feed_h](
                 std::vector<int> k, Sym c) -> std::optional<std::vector<int>> {
      const int ph = k[0];
      const int st = (c >= g && c < g + m) ? c - g : -1;
      const bool pl = c >= 0 && c < g;
      auto step_to = [&p](int s, Sym ch) {
        return p.delta[static_cast<size_t>(s)][static_cast<size_t>(ch)];
      };
      if (ph == PH_Q) {
        if (st >= 0 && qc[static_cast<size_t>(st)])
          return std::vector<int>{PH_R, st, -1, -1, -1, -1, -1, 0, 0};
        return std::nullopt;
      }
      if (ph == PH_R) {
        if (st >= 0 && rc[static_cast<size_t>(st)]) {
          int q = k[1];
          return std::vector<int>{SP_G, q, st, q, q, st, feed_h ? q : st, 0, 0};
        }
        return std::nullopt;
      }
      if (ph == PH_WREST) {
        if (c == kEnd) {
          k[0] = PH_DONE;
          return k;
        }
        if (pl && p.tape_of[static_cast<size_t>(k[6])] == 0) {
          k[6] = step_to(k[6], c);
          return k;
        }
        return std::nullopt;
      }
      if (ph == PH_DONE) return std::nullopt;
      // Shuffle phases. Owner 0 means the membership run demands w1.
      if (!k[7] && p.tape_of[static_cast<size_t>(k[6])] == 0) {
        if (c == kEnd) {
          k[7] = 1;
          return k;
        }
        if (pl) {
          k[6] = step_to(k[6], c);
          return k;
        }
        return std::nullopt;
      }
      switch (ph) {
        case SP_G:
          if (pl) {
            if (p.tape_of[static_cast<size_t>(k[3])] != 1) return std::nullopt;
            k[3] = step_to(k[3], c);
            return k;
          }
          if (c == enc.dia) {
            k[0] = SP_H;
            return k;
          }
          return std::nullopt;
        case SP_H:
          if (pl) {
            if (p.tape_of[static_cast<size_t>(k[4])] != 1) return std::nullopt;
            k[4] = step_to(k[4], c);
            if (feed_h) {
              if (k[7] && p.tape_of[static_cast<size_t>(k[6])] == 0) return std::nullopt;
              k[6] = step_to(k[6], c);
            }
            return k;
          }
          if (c == enc.dia) {
            k[0] = SP_A;
            return k;
          }
          if (c == enc.mark) {
            if (k[3] == k[1] && k[4] == k[2] && k[5] == k[2] && k[8]) {
              k[0] = SP_Y;
              return k;
            }
            return std::nullopt;
          }
          return std::nullopt;
        case SP_A:
          if (pl && p.tape_of[static_cast<size_t>(k[3])] == 0 &&
              p.tape_of[static_cast<size_t>(k[4])] == 0 &&
              p.tape_of[static_cast<size_t>(k[5])] == 0) {
            k[3] = step_to(k[3], c);
            k[4] = step_to(k[4], c);
            k[5] = step_to(k[5], c);
            k[8] = 1;
            k[0] = SP_D;
            return k;
          }
          return std::nullopt;
        case SP_D:
          if (c == enc.dia) {
            k[0] = SP_G;
            return k;
          }
          return std::nullopt;
        default:  // SP_Y
          if (pl) {
            if (k[7] && p.tape_of[static_cast<size_t>(k[6])] == 0) return std::nullopt;
            k[6] = step_to(k[6], c);
            return k;
          }
          if (c == kEnd) {
            k[0] = k[7] ? PH_DONE : PH_WREST;
            return k;
          }
          return std::nullopt;
      }
    };
    b.is_final = [&p](const std::vector<int>& k) {
      return k[0] == PH_DONE && p.finals[static_cast<size_t>(k[6])];
    };
    return build_det(b, {PH_Q, -1, -1, -1, -1, -1, -1, 0, 0}, state_cap);
  };
  enc.c1 = build(true);
  enc.c2 = build(false);
  return enc;
}

KaryEncoding kary_encode(const Mdfa& a, long long state_cap, long long nt_cap) {
  if (a.arity < 2) throw InputError("kary_encode: arity >= 2 required");
  PlainDet p = make_plain(a);
  Dfa nt = null_transparent_dfa(a, nt_cap);
  const int m = p.num_states();
  const int g = p.gamma.size();
  const int nsig = a.sigma.size();
  const int full = (1 << a.arity) - 1;
  std::vector<bool> qc = on_cycle(p);
  std::vector<bool> reach = reachable_states(p);
  for (int i = 0; i < m; ++i) qc[static_cast<size_t>(i)] = qc[static_cast<size_t>(i)] && reach[static_cast<size_t>(i)];

  KaryEncoding enc;
  enc.letters = p.gamma;
  enc.state_letter.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    enc.state_letter[static_cast<size_t>(i)] = enc.letters.add(enc.letters.fresh_name("s" + std::to_string(i)));
  enc.mark = enc.letters.add(enc.letters.fresh_name("mark"));

  auto owner_of = [&p](const std::vector<int>& k, int arity) {
    if (k[0] == KQ) return 0;
    int t = p.tape_of[static_cast<size_t>(k[4])];
    if (k[0] != KW) return (t > 0 && !((k[5] >> t) & 1)) ? t : 0;
    if (!((k[5] >> t) & 1)) return t;
    for (int i = 0; i < arity; ++i)
      if (!((k[5] >> i) & 1)) return i;
    return 0;
  };
  auto build = [&](bool feed_v1) {
    DetBuild b;
    b.arity = a.arity;
    b.sigma = enc.letters;
    b.owner = [owner_of, arity = a.arity](const std::vector<int>& k) { return owner_of(k, arity); };
    b.step = [&p, &enc, &nt, &qc, owner_of, m, g, nsig, feed_v1, arity = a.arity](
                 std::vector<int> k, Sym c) -> std::optional<std::vector<int>> {
      const int ph = k[0];
      const int st = (c >= g && c < g + m) ? c - g : -1;
      const bool pl = c >= 0 && c < g;
      auto step_to = [&p](int s, Sym ch) {
        return p.delta[static_cast<size_t>(s)][static_cast<size_t>(ch)];
      };
      if (ph == KQ) {
        if (st >= 0 && qc[static_cast<size_t>(st)])
          return std::vector<int>{KS, st, st, nt.initial, st, 0};
        return std::nullopt;
      }
      const int own = owner_of(k, arity);
      if (own >= 1) {  // a data tape letter or its end
        bool wants =
            p.tape_of[static_cast<size_t>(k[4])] == own && !((k[5] >> own) & 1);
        if (pl) {
          if (!wants) return std::nullopt;
          k[4] = step_to(k[4], c);
          return k;
        }
        if (c == kEnd) {
          k[5] |= 1 << own;
          return k;
        }
        return std::nullopt;
      }
      if (ph == KS) {
        if (st >= 0 && st == k[2]) {
          k[0] = KG;
          return k;
        }
        return std::nullopt;
      }
      if (ph == KG) {
        if (pl) {
          int cur = k[2];
          if (p.tape_of[static_cast<size_t>(cur)] == 0) {
            if (c >= nsig) return std::nullopt;  // v1 stays in the base alphabet
            k[3] = nt.delta[static_cast<size_t>(k[3])][static_cast<size_t>(c)];
            if (feed_v1) {
              if (p.tape_of[static_cast<size_t>(k[4])] != 0) return std::nullopt;
              k[4] = step_to(k[4], c);
            }
          }
          k[2] = step_to(cur, c);
          k[0] = KS;
          return k;
        }
        if (c == enc.mark) {
          if (k[2] == k[1] && nt.finals[static_cast<size_t>(k[3])]) {
            k[0] = KW;
            return k;
          }
          return std::nullopt;
        }
        return std::nullopt;
      }
      // KW with owner 0: w1 letters or the front end mark.
      if (pl) {
        if (p.tape_of[static_cast<size_t>(k[4])] != 0 || (k[5] & 1)) return std::nullopt;
        k[4] = step_to(k[4], c);
        return k;
      }
      if (c == kEnd) {
        k[5] |= 1;
        return k;
      }
      return std::nullopt;
    };
    b.is_final = [&p, full](const std::vector<int>& k) {
      return k[0] == KW && k[5] == full && p.finals[static_cast<size_t>(k[4])];
    };
    return build_det(b, {KQ, -1, -1, -1, -1, 0}, state_cap);
  };
  enc.p1 = build(false);
  enc.p2 = build(true);
  return enc;
}

bool witness_valid(const Mdfa& a, int j, const NonRecWitness& w) {
  return witness_valid_plain(make_plain(drat_view(a, j)), w);
}

RecResult decide_recognizable(const Mdfa& a, const RecOptions& opt) {
  RecResult res;
  if (a.arity < 2) return res;
  for (int j = 0; j < a.arity; ++j) {
    if (explore_classes(a, j, opt.class_cap, opt.class_len_cap)) continue;
    Mdfa view = drat_view(a, j);
    PlainDet p = make_plain(view);
    std::optional<NonRecWitness> w;
    if (p.num_states() <= opt.encode_plain_cap) {
      try {
        if (a.arity == 2) {
          ShuffleEncoding enc = shuffle_encode(view, opt.encode_state_cap);
          w = hunt_with_equiv(enc.c1, enc.c2, opt, [&](const WordTuple& ce) {
            return decode_shuffle(p, enc, ce);
          });
        } else {
          KaryEncoding enc = kary_encode(view, opt.encode_state_cap);
          w = hunt_with_equiv(enc.p1, enc.p2, opt, [&](const WordTuple& ce) {
            return decode_kary(p, enc, ce);
          });
        }
      } catch (const BudgetError&) {
      }
    }
    if (!w) w = pattern_search(p, opt);
    if (w && witness_valid_plain(p, *w)) {
      res.recognizable = false;
      res.tape = j;
      res.witness = std::move(w);
      return res;
    }
    throw BudgetError("decide_recognizable: tape " + std::to_string(j) +
                          " unresolved within budget",
                      opt.class_cap);
  }
  return res;
}

Mdfa eq_to_rec(const Mdfa& a, const Mdfa& b) {
  if (a.arity != b.arity || a.arity < 2 || !(a.sigma == b.sigma))
    throw InputError("eq_to_rec: same arity >= 2 and same alphabet required");
  const long long n = a.num_states() + b.num_states();
  const int ns = a.sigma.size();
  Alphabet sig = a.sigma;
  const Sym pump = sig.add(sig.fresh_name("p"));
  const Sym hash = sig.add(sig.fresh_name("h"));
  enum { E0, E1A, E1B, M0, M1, INA, INB };
  // Key: mode, inner state, letters consumed by the inner machine.
  DetBuild d;
  d.arity = a.arity;
  d.sigma = sig;
  d.owner = [&a, &b](const std::vector<int>& k) {
    switch (k[0]) {
      case E0:
      case M0:
        return 0;
      case E1A:
      case E1B:
      case M1:
        return 1;
      case INA:
        return a.tape_of[static_cast<size_t>(k[1])];
      default:
        return b.tape_of[static_cast<size_t>(k[1])];
    }
  };
  d.step = [&a, &b, n, ns, pump, hash](std::vector<int> k,
                                       Sym c) -> std::optional<std::vector<int>> {
    switch (k[0]) {
      case E0:
        if (c == pump) return std::vector<int>{E1A, -1, 0};
        if (c == hash) return std::vector<int>{E1B, -1, 0};
        return std::nullopt;
      case E1A:
        if (c == pump) return std::vector<int>{E0, -1, 0};
        if (c == hash) return std::vector<int>{M0, -1, 0};
        return std::nullopt;
      case E1B:
        if (c == hash) return std::vector<int>{INA, a.initial, 0};
        if (c == pump) return std::vector<int>{M1, -1, 0};
        return std::nullopt;
      case M0:
      case M1:
        if (c == pump) return k;
        if (c == hash) return std::vector<int>{INB, b.initial, 0};
        return std::nullopt;
      default: {
        const Mdfa& inner = k[0] == INA ? a : b;
        if (c == kEnd) {
          k[1] = inner.delta_end[static_cast<size_t>(k[1])];
          return k;
        }
        if (c >= 0 && c < ns) {
          if (k[2] + 1 >= n) return std::nullopt;  // total length < |a| + |b|
          k[1] = inner.delta[static_cast<size_t>(k[1])][static_cast<size_t>(c)];
          ++k[2];
          return k;
        }
        return std::nullopt;
      }
    }
  };
  d.is_final = [&a, &b](const std::vector<int>& k) {
    if (k[0] == INA) return static_cast<bool>(a.finals[static_cast<size_t>(k[1])]);
    if (k[0] == INB) return static_cast<bool>(b.finals[static_cast<size_t>(k[1])]);
    return false;
  };
  return build_det(d, {E0, -1, 0}, 10'000'000);
}

IndependentOutcome build_independent(const Mdfa& a, long long class_cap) {
  IndependentOutcome out;
  std::vector<ClassExp> comps;
  for (int j = 0; j < a.arity; ++j) {
    std::optional<ClassExp> e = explore_classes(a, j, class_cap, class_cap);
    if (!e) {
      RecResult rr = decide_recognizable(a);
      if (!rr.recognizable) {
        out.evidence = std::move(rr);
        return out;
      }
      throw BudgetError("build_independent: class cap exceeded on tape " + std::to_string(j),
                        class_cap);
    }
    comps.push_back(std::move(*e));
  }
  IndependentKTape ind;
  ind.arity = a.arity;
  ind.sigma = a.sigma;
  long long product = 1;
  for (const ClassExp& e : comps) {
    Dfa d;
    d.sigma = a.sigma;
    d.initial = 0;
    d.delta = e.delta;
    d.finals.assign(e.reps.size(), false);
    for (size_t i = 0; i < e.reps.size(); ++i) d.state_names.push_back("c" + std::to_string(i));
    ind.components.push_back(std::move(d));
    product *= static_cast<long long>(e.reps.size());
    if (product > 2'000'000)
      throw BudgetError("build_independent: accepting-tuple product too large", product);
  }
  std::vector<int> tup(static_cast<size_t>(a.arity), 0);
  for (;;) {
    WordTuple u(static_cast<size_t>(a.arity));
    for (int t = 0; t < a.arity; ++t)
      u[static_cast<size_t>(t)] = comps[static_cast<size_t>(t)].reps[static_cast<size_t>(tup[static_cast<size_t>(t)])];
    if (member_det(a, u)) ind.final_tuples.insert(tup);
    int t = a.arity - 1;
    while (t >= 0 && tup[static_cast<size_t>(t)] + 1 >=
                         static_cast<int>(comps[static_cast<size_t>(t)].reps.size())) {
      tup[static_cast<size_t>(t)] = 0;
      --t;
    }
    if (t < 0) break;
    ++tup[static_cast<size_t>(t)];
  }
  out.independent = std::move(ind);
  return out;
}

Mdfa independent_to_det(const IndependentKTape& ind) {
  if (static_cast<int>(ind.components.size()) != ind.arity)
    throw InputError("independent_to_det: component count must match arity");
  DetBuild b;
  b.arity = ind.arity;
  b.sigma = ind.sigma;
  const int k = ind.arity;
  b.owner = [k](const std::vector<int>& key) { return key[0] < k ? key[0] : 0; };
  b.step = [&ind, k](std::vector<int> key, Sym c) -> std::optional<std::vector<int>> {
    int t = key[0];
    if (t >= k) return std::nullopt;
    if (c == kEnd) {
      key[0] = t + 1;
      return key;
    }
    key[static_cast<size_t>(t) + 1] =
        ind.components[static_cast<size_t>(t)]
            .delta[static_cast<size_t>(key[static_cast<size_t>(t) + 1])][static_cast<size_t>(c)];
    return key;
  };
  b.is_final = [&ind, k](const std::vector<int>& key) {
    if (key[0] != k) return false;
    return ind.final_tuples.count(std::vector<int>(key.begin() + 1, key.end())) > 0;
  };
  std::vector<int> init{0};
  for (const Dfa& d : ind.components) init.push_back(d.initial);
  return build_det(b, init, 10'000'000);
}

}  // namespace relkit
