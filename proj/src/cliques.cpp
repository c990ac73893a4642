#include "relkit/cliques.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "relkit/omega.hpp"
#include "relkit/oracles.hpp"

namespace relkit {

namespace {

// --- shared context over an NBA reading pairs ------------------------------

struct PairCtx {
  const Nba* a = nullptr;
  int n = 0;
  int ss = 0;                                       // alphabet size
  std::vector<std::vector<std::vector<int>>> succ;  // [q][x*ss+y] -> dsts

  explicit PairCtx(const Nba& nba) : a(&nba) {
    if (nba.width != 2)
      throw InputError("clique analysis requires an automaton over pairs");
    n = nba.num_states();
    ss = static_cast<int>(nba.sigma.size());
    succ.assign(n, std::vector<std::vector<int>>(ss * ss));
    for (const auto& t : nba.transitions) {
      if (t.letter[0] < 0 || t.letter[1] < 0)
        throw InputError("clique analysis requires padding-free letters");
      succ[t.src][t.letter[0] * ss + t.letter[1]].push_back(t.dst);
    }
  }
  const std::vector<int>& step(int q, Sym x, Sym y) const {
    return succ[q][x * ss + y];
  }
  bool acc(int q) const { return a->accepting[q]; }
};

// --- reachability along diagonal letters (a,a), tracking accepting visits --

struct DiagReach {
  // node = q*2 + flag, flag = "run visited an accepting state (endpoints
  // included)"
  std::vector<int> dist, par;
  std::vector<Sym> via;
};

DiagReach diag_bfs(const PairCtx& c, int src) {
  DiagReach r;
  r.dist.assign(2 * c.n, -1);
  r.par.assign(2 * c.n, -1);
  r.via.assign(2 * c.n, 0);
  int start = src * 2 + (c.acc(src) ? 1 : 0);
  r.dist[start] = 0;
  std::queue<int> q;
  q.push(start);
  while (!q.empty()) {
    int node = q.front();
    q.pop();
    int p = node / 2, flag = node % 2;
    for (Sym a = 0; a < c.ss; ++a)
      for (int d : c.step(p, a, a)) {
        int nf = flag | (c.acc(d) ? 1 : 0);
        int nn = d * 2 + nf;
        if (r.dist[nn] >= 0) continue;
        r.dist[nn] = r.dist[node] + 1;
        r.par[nn] = node;
        r.via[nn] = a;
        q.push(nn);
      }
  }
  return r;
}

bool dreaches(const DiagReach& r, int q) {
  return r.dist[2 * q] >= 0 || r.dist[2 * q + 1] >= 0;
}
bool dreaches_f(const DiagReach& r, int q) { return r.dist[2 * q + 1] >= 0; }

Word diag_word(const DiagReach& r, int q, bool need_f) {
  int node = 2 * q + 1;
  if (!need_f && r.dist[2 * q] >= 0 &&
      (r.dist[node] < 0 || r.dist[2 * q] <= r.dist[node]))
    node = 2 * q;
  Word w;
  while (r.par[node] >= 0) {
    w.push_back(r.via[node]);
    node = r.par[node];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

// --- the five-run product search for one guessed (q2,q3,q4) ----------------
//
// Tracks runs s2: q2 -(v,v)-> q2, s3: q2 -(w,v)-> q3, s4: q3 -(x,v)-> q3,
// s5: q3 -(x,w)-> q4, s6: q4 -(x,x)-> q4 letter by letter; "diff" records
// v != w so far, f3/f5 record accepting visits on the two non-loop runs.

struct MiddleOut {
  bool any = false, withf = false;
  Word v, w, x;     // witness for "any"
  Word vf, wf, xf;  // witness for "withf"
};

MiddleOut middle_search(const PairCtx& c, int q2, int q3, int q4,
                        long long& budget) {
  MiddleOut out;
  int n = c.n;
  auto code = [&](int s2, int s3, int s4, int s5, int s6, int bits) {
    return ((((static_cast<long long>(s2) * n + s3) * n + s4) * n + s5) * n +
            s6) *
               8 +
           bits;
  };
  std::unordered_map<long long, int> idx;
  std::vector<long long> codes;
  std::vector<int> par;
  std::vector<int> via;  // packed triple va*ss*ss + wa*ss + xa
  auto extract = [&](int node, Word* v, Word* w, Word* x) {
    while (par[node] >= 0) {
      int t = via[node];
      x->push_back(t % c.ss);
      w->push_back((t / c.ss) % c.ss);
      v->push_back(t / (c.ss * c.ss));
      node = par[node];
    }
    std::reverse(v->begin(), v->end());
    std::reverse(w->begin(), w->end());
    std::reverse(x->begin(), x->end());
  };
  int b0 = (c.acc(q2) ? 2 : 0) | (c.acc(q3) ? 4 : 0);
  long long c0 = code(q2, q2, q3, q3, q4, b0);
  idx.emplace(c0, 0);
  codes.push_back(c0);
  par.push_back(-1);
  via.push_back(0);
  std::queue<int> work;
  work.push(0);
  while (!work.empty() && !(out.any && out.withf)) {
    int node = work.front();
    work.pop();
    long long cc = codes[node];
    int bits = cc % 8;
    long long rest = cc / 8;
    int s6 = rest % n;
    rest /= n;
    int s5 = rest % n;
    rest /= n;
    int s4 = rest % n;
    rest /= n;
    int s3 = rest % n;
    int s2 = static_cast<int>(rest / n);
    for (Sym va = 0; va < c.ss; ++va)
      for (Sym wa = 0; wa < c.ss; ++wa)
        for (Sym xa = 0; xa < c.ss; ++xa) {
          const auto& l2 = c.step(s2, va, va);
          const auto& l3 = c.step(s3, wa, va);
          const auto& l4 = c.step(s4, xa, va);
          const auto& l5 = c.step(s5, xa, wa);
          const auto& l6 = c.step(s6, xa, xa);
          if (l2.empty() || l3.empty() || l4.empty() || l5.empty() ||
              l6.empty())
            continue;
          int dbit = (bits & 1) | (va != wa ? 1 : 0);
          for (int d2 : l2)
            for (int d3 : l3)
              for (int d4 : l4)
                for (int d5 : l5)
                  for (int d6 : l6) {
                    int nb = dbit | (bits & 6) | (c.acc(d3) ? 2 : 0) |
                             (c.acc(d5) ? 4 : 0);
                    long long nc = code(d2, d3, d4, d5, d6, nb);
                    if (idx.count(nc)) continue;
                    if (--budget < 0)
                      throw BudgetError(
                          "three_cycles: product node budget exceeded");
                    int id = static_cast<int>(codes.size());
                    idx.emplace(nc, id);
                    codes.push_back(nc);
                    par.push_back(node);
                    via.push_back((va * c.ss + wa) * c.ss + xa);
                    work.push(id);
                    bool target = d2 == q2 && d3 == q3 && d4 == q3 &&
                                  d5 == q4 && d6 == q4 && (nb & 1);
                    if (target && !out.any) {
                      out.any = true;
                      extract(id, &out.v, &out.w, &out.x);
                    }
                    if (target && (nb & 6) && !out.withf) {
                      out.withf = true;
                      extract(id, &out.vf, &out.wf, &out.xf);
                    }
                  }
        }
  }
  return out;
}

// --- full analysis: all sources' diagonal reach + cached middle searches ---

struct Analysis {
  PairCtx c;
  std::vector<DiagReach> dr;
  std::vector<bool> diag_cycle, any_cycle;
  // Cheap necessary conditions from two-run relaxations of the product:
  // t23[q2][q3] covers the (v,v)/(w,v) runs, t45[q3][q4] the (x,v)/(x,w)
  // runs. They prune the (q2,q3,q4) guess space before the full search.
  std::vector<std::vector<bool>> t23, t45;
  std::vector<char> mid_done;
  std::vector<MiddleOut> mid;
  long long budget;

  Analysis(const Nba& a, long long node_cap) : c(a), budget(node_cap) {
    int n = c.n;
    dr.reserve(n);
    for (int q = 0; q < n; ++q) dr.push_back(diag_bfs(c, q));
    // States must sit on a cycle of the appropriate kind to host the three
    // loop runs; cuts the guess space sharply.
    std::vector<std::vector<int>> dadj(n), fadj(n);
    std::vector<bool> dself(n, false), fself(n, false);
    for (const auto& t : c.a->transitions) {
      fadj[t.src].push_back(t.dst);
      if (t.src == t.dst) fself[t.src] = true;
      if (t.letter[0] == t.letter[1]) {
        dadj[t.src].push_back(t.dst);
        if (t.src == t.dst) dself[t.src] = true;
      }
    }
    auto on_cycle = [&](const std::vector<std::vector<int>>& adj,
                        const std::vector<bool>& self) {
      SccInfo s = strongly_connected(adj);
      std::vector<int> size(s.count, 0);
      for (int q = 0; q < n; ++q) ++size[s.comp[q]];
      std::vector<bool> r(n, false);
      for (int q = 0; q < n; ++q) r[q] = size[s.comp[q]] > 1 || self[q];
      return r;
    };
    diag_cycle = on_cycle(dadj, dself);
    any_cycle = on_cycle(fadj, fself);
    auto pair_table = [&](bool second_kind) {
      // Nodes (r1, r2). First kind steps r1 on (va,va), r2 on (wa,va);
      // second kind steps r1 on (xa,va), r2 on (xa,wa).
      std::vector<std::vector<int>> adj(static_cast<std::size_t>(n) * n);
      for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = 0; r2 < n; ++r2) {
          auto& out = adj[static_cast<std::size_t>(r1) * n + r2];
          for (Sym s1 = 0; s1 < c.ss; ++s1) {
            std::vector<int> d1s, d2s;
            for (Sym s2 = 0; s2 < c.ss; ++s2) {
              const auto& l1 =
                  second_kind ? c.step(r1, s1, s2) : c.step(r1, s1, s1);
              const auto& l2 = c.step(r2, s2, s1);
              if (second_kind) {
                d1s.insert(d1s.end(), l1.begin(), l1.end());
                for (int d : c.step(r2, s1, s2))
                  d2s.push_back(d);
              } else {
                for (int d1 : l1)
                  for (int d2 : l2) out.push_back(d1 * n + d2);
              }
            }
            if (second_kind)
              for (int d1 : d1s)
                for (int d2 : d2s) out.push_back(d1 * n + d2);
          }
        }
      std::vector<std::vector<bool>> t(n, std::vector<bool>(n, false));
      std::vector<int> mark(static_cast<std::size_t>(n) * n, -1);
      for (int q = 0; q < n; ++q) {
        std::queue<int> bfs;
        for (int d : adj[static_cast<std::size_t>(q) * n + q])
          if (mark[d] != q) {
            mark[d] = q;
            bfs.push(d);
          }
        while (!bfs.empty()) {
          int v = bfs.front();
          bfs.pop();
          for (int d : adj[v])
            if (mark[d] != q) {
              mark[d] = q;
              bfs.push(d);
            }
        }
        for (int r2 = 0; r2 < n; ++r2)
          t[q][r2] = mark[static_cast<std::size_t>(q) * n + r2] == q;
      }
      return t;
    };
    t23 = pair_table(false);
    t45 = pair_table(true);
    mid_done.assign(static_cast<std::size_t>(n) * n * n, 0);
    mid.resize(mid_done.size());
  }

  const MiddleOut& middle(int q2, int q3, int q4) {
    std::size_t key =
        (static_cast<std::size_t>(q2) * c.n + q3) * c.n + q4;
    if (!mid_done[key]) {
      mid_done[key] = 1;
      if (diag_cycle[q2] && any_cycle[q3] && diag_cycle[q4] && t23[q2][q3] &&
          t45[q3][q4])
        mid[key] = middle_search(c, q2, q3, q4, budget);
    }
    return mid[key];
  }
};

ThreeCyclesRel matrices(Analysis& an) {
  int n = an.c.n;
  ThreeCyclesRel r;
  r.rel.assign(n, std::vector<bool>(n, false));
  r.relF.assign(n, std::vector<bool>(n, false));
  for (int q2 = 0; q2 < n; ++q2)
    for (int q3 = 0; q3 < n; ++q3)
      for (int q4 = 0; q4 < n; ++q4) {
        const MiddleOut& m = an.middle(q2, q3, q4);
        if (!m.any) continue;
        for (int q1 = 0; q1 < n; ++q1) {
          if (!dreaches(an.dr[q1], q2)) continue;
          bool f_u = dreaches_f(an.dr[q1], q2);
          for (int q5 = 0; q5 < n; ++q5) {
            if (!dreaches(an.dr[q4], q5)) continue;
            r.rel[q1][q5] = true;
            if (m.withf || f_u || dreaches_f(an.dr[q4], q5))
              r.relF[q1][q5] = true;
          }
        }
      }
  return r;
}

std::optional<ThreeCyclesWitness> witness_impl(Analysis& an, int q1, int q5,
                                               bool need_final) {
  int n = an.c.n;
  for (int q2 = 0; q2 < n; ++q2) {
    if (!dreaches(an.dr[q1], q2)) continue;
    for (int q3 = 0; q3 < n; ++q3)
      for (int q4 = 0; q4 < n; ++q4) {
        if (!dreaches(an.dr[q4], q5)) continue;
        const MiddleOut& m = an.middle(q2, q3, q4);
        if (!m.any) continue;
        ThreeCyclesWitness wit;
        wit.q1 = q1;
        wit.q2 = q2;
        wit.q3 = q3;
        wit.q4 = q4;
        wit.q5 = q5;
        if (!need_final) {
          wit.u = diag_word(an.dr[q1], q2, false);
          wit.v = m.v;
          wit.w = m.w;
          wit.x = m.x;
          wit.y = diag_word(an.dr[q4], q5, false);
          return wit;
        }
        // Place an accepting visit on one of the four non-loop runs,
        // preferring the middle runs where the search already tracked it.
        if (m.withf) {
          wit.u = diag_word(an.dr[q1], q2, false);
          wit.v = m.vf;
          wit.w = m.wf;
          wit.x = m.xf;
          wit.y = diag_word(an.dr[q4], q5, false);
          return wit;
        }
        bool f_u = dreaches_f(an.dr[q1], q2);
        bool f_y = dreaches_f(an.dr[q4], q5);
        if (f_u || f_y) {
          wit.u = diag_word(an.dr[q1], q2, f_u);
          wit.v = m.v;
          wit.w = m.w;
          wit.x = m.x;
          wit.y = diag_word(an.dr[q4], q5, !f_u && f_y);
          return wit;
        }
      }
  }
  return std::nullopt;
}

// --- existence of z with (z,z)^w accepted from q, via run profiles ---------
//
// A profile of a nonempty diagonal word records, per state pair, whether a
// run exists and whether one exists visiting an accepting state; profiles of
// concatenations compose, so the (finite) set of all profiles is generated
// from the single-letter ones. (z,z)^w is accepted from q iff some profile
// admits a lasso from q whose loop carries an accepting visit.

struct BitMat {
  int n = 0, ww = 0;
  std::vector<std::uint64_t> b;
  BitMat() = default;
  explicit BitMat(int size) : n(size), ww((size + 63) / 64), b(n * ww, 0) {}
  bool get(int i, int j) const { return (b[i * ww + j / 64] >> (j % 64)) & 1; }
  void set(int i, int j) { b[i * ww + j / 64] |= 1ull << (j % 64); }
  BitMat mul(const BitMat& o) const {
    BitMat r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (get(i, j))
          for (int w = 0; w < ww; ++w) r.b[i * ww + w] |= o.b[j * ww + w];
    return r;
  }
  void ior(const BitMat& o) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] |= o.b[i];
  }
  bool operator==(const BitMat& o) const { return b == o.b; }
};

struct Profile {
  BitMat reach, reach_f;
  Word word;  // shortest generating word, in discovery order
};

Profile compose(const Profile& a, const Profile& b) {
  Profile r;
  r.reach = a.reach.mul(b.reach);
  r.reach_f = a.reach_f.mul(b.reach);
  r.reach_f.ior(a.reach.mul(b.reach_f));
  r.word = a.word;
  r.word.insert(r.word.end(), b.word.begin(), b.word.end());
  return r;
}

// word_for[q] = some z with (z,z)^w accepted from q, when one exists.
std::vector<std::optional<Word>> diag_lasso_words(const PairCtx& c,
                                                  long long element_cap) {
  int n = c.n;
  std::vector<Profile> gens;
  for (Sym a = 0; a < c.ss; ++a) {
    Profile p;
    p.reach = BitMat(n);
    p.reach_f = BitMat(n);
    p.word = {a};
    for (int q = 0; q < n; ++q)
      for (int d : c.step(q, a, a)) {
        p.reach.set(q, d);
        if (c.acc(q) || c.acc(d)) p.reach_f.set(q, d);
      }
    gens.push_back(std::move(p));
  }
  std::vector<std::optional<Word>> out(n);
  std::map<std::vector<std::uint64_t>, int> seen;
  std::vector<Profile> elems;
  auto key_of = [](const Profile& p) {
    std::vector<std::uint64_t> k = p.reach.b;
    k.insert(k.end(), p.reach_f.b.begin(), p.reach_f.b.end());
    return k;
  };
  auto consider = [&](Profile p) -> bool {
    auto k = key_of(p);
    if (seen.count(k)) return false;
    if (static_cast<long long>(elems.size()) >= element_cap)
      throw BudgetError("diagonal lasso search: profile budget exceeded");
    seen.emplace(std::move(k), static_cast<int>(elems.size()));
    elems.push_back(std::move(p));
    return true;
  };
  for (const auto& g : gens) consider(g);
  for (std::size_t next = 0; next < elems.size(); ++next) {
    // Evaluate this profile: iterated powers give runs over z^i.
    Profile plus = elems[next];
    for (;;) {
      Profile step = compose(plus, elems[next]);
      BitMat nr = plus.reach;
      nr.ior(step.reach);
      BitMat nf = plus.reach_f;
      nf.ior(step.reach_f);
      if (nr == plus.reach && nf == plus.reach_f) break;
      plus.reach = nr;
      plus.reach_f = nf;
    }
    for (int q = 0; q < n; ++q) {
      if (out[q]) continue;
      for (int s = 0; s < n; ++s)
        if (plus.reach_f.get(s, s) && (s == q || plus.reach.get(q, s))) {
          out[q] = elems[next].word;
          break;
        }
    }
    for (const auto& g : gens) consider(compose(elems[next], g));
  }
  return out;
}

std::optional<CliqueCertificate> prefix_impl(Analysis& an,
                                             long long element_cap) {
  const PairCtx& c = an.c;
  auto lasso = diag_lasso_words(c, element_cap);
  int q0 = c.a->initial;
  for (int q = 0; q < c.n; ++q) {
    if (!lasso[q]) continue;
    auto wit = witness_impl(an, q0, q, false);
    if (!wit) continue;
    CliqueCertificate cert;
    cert.kind = CliqueCertificate::Kind::kPrefix;
    cert.u = wit->u;
    cert.v = wit->v;
    cert.w = wit->w;
    cert.x = wit->x;
    cert.y = wit->y;
    cert.z = *lasso[q];
    return cert;
  }
  return std::nullopt;
}

std::optional<CliqueCertificate> periodic_impl(Analysis& an) {
  int n = an.c.n;
  ThreeCyclesRel m = matrices(an);
  // Reflexive-transitive closure of the pattern relation.
  std::vector<std::vector<bool>> star(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) star[i][i] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.rel[i][j]) star[i][j] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (star[i][k])
        for (int j = 0; j < n; ++j)
          if (star[k][j]) star[i][j] = true;
  const DiagReach& from0 = an.dr[an.c.a->initial];
  auto rel_path = [&](int from, int to) {
    // Shortest edge path in the pattern relation, possibly empty.
    std::vector<int> par(n, -2);
    par[from] = -1;
    std::queue<int> q;
    q.push(from);
    while (!q.empty() && par[to] == -2) {
      int p = q.front();
      q.pop();
      for (int d = 0; d < n; ++d)
        if (m.rel[p][d] && par[d] == -2) {
          par[d] = p;
          q.push(d);
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (int at = to; par[at] >= 0; at = par[at])
      edges.push_back({par[at], at});
    std::reverse(edges.begin(), edges.end());
    return edges;
  };
  for (int q1 = 0; q1 < n; ++q1) {
    if (!dreaches(from0, q1)) continue;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (!m.relF[s][t]) continue;
        if (!star[q1][t] || !star[t][s]) continue;
        CliqueCertificate cert;
        cert.kind = CliqueCertificate::Kind::kPeriodic;
        cert.z = diag_word(from0, q1, false);
        auto p1 = rel_path(q1, t);
        auto p2 = rel_path(t, s);
        cert.loop_start = static_cast<int>(p1.size());
        auto add = [&](int from, int to, bool need_f) {
          auto wit = witness_impl(an, from, to, need_f);
          // The matrices certify existence, so reconstruction cannot fail.
          cert.chain.push_back(*wit);
        };
        for (auto [x, y] : p1) add(x, y, false);
        for (auto [x, y] : p2) add(x, y, false);
        add(s, t, true);
        return cert;
      }
  }
  return std::nullopt;
}

}  // namespace

ThreeCyclesRel three_cycles(const Nba& a, long long node_cap) {
  Analysis an(a, node_cap);
  return matrices(an);
}

std::optional<ThreeCyclesWitness> three_cycles_witness(const Nba& a, int q1,
                                                       int q5, bool need_final,
                                                       long long node_cap) {
  Analysis an(a, node_cap);
  return witness_impl(an, q1, q5, need_final);
}

std::optional<CliqueCertificate> detect_prefix_pattern(const Nba& a,
                                                       long long node_cap) {
  Analysis an(a, node_cap);
  return prefix_impl(an, node_cap);
}

std::optional<CliqueCertificate> detect_periodic_pattern(const Nba& a,
                                                         long long node_cap) {
  Analysis an(a, node_cap);
  return periodic_impl(an);
}

std::optional<CliqueCertificate> has_infinite_clique(const Nba& a,
                                                     long long node_cap) {
  Analysis an(a, node_cap);
  if (auto c = prefix_impl(an, node_cap)) return c;
  return periodic_impl(an);
}

std::optional<std::string> check_co_equivalence_sample(const Nba& a,
                                                       std::uint64_t seed,
                                                       int samples) {
  if (a.width != 2)
    throw InputError("co-equivalence check requires an automaton over pairs");
  std::mt19937_64 gen(seed);
  int ss = static_cast<int>(a.sigma.size());
  auto rand_word = [&](int len) {
    Word w;
    for (int i = 0; i < len; ++i)
      w.push_back(static_cast<Sym>(gen() % ss));
    return w;
  };
  auto rand_up = [&]() {
    return UpWord{rand_word(static_cast<int>(gen() % 3)),
                  rand_word(1 + static_cast<int>(gen() % 3))};
  };
  auto str = [&](const UpWord& w) {
    return word_to_string(a.sigma, w.prefix, false) + "(" +
           word_to_string(a.sigma, w.period, false) + ")^w";
  };
  auto rel = [&](const UpWord& x, const UpWord& y) {
    return member_upword(a, {x, y});
  };
  for (int i = 0; i < samples; ++i) {
    UpWord x = rand_up(), y = rand_up(), z = rand_up();
    if (rel(x, x))
      return "relates " + str(x) + " to itself (complement not reflexive)";
    if (rel(x, y) != rel(y, x))
      return "asymmetric on " + str(x) + " and " + str(y);
    if (!rel(x, y) && !rel(y, z) && rel(x, z))
      return "complement not transitive on " + str(x) + ", " + str(y) + ", " +
             str(z);
  }
  return std::nullopt;
}

namespace {

// Product reading (x,y): `fst` runs on x in slot j, `snd` on y, both over a
// shared guessed tuple for the remaining slots; Buchi intersection flag.
Nba accept_reject_product(const Nba& fst, const Nba& snd, int j) {
  Nba out;
  out.width = 2;
  out.sigma = fst.sigma;
  int n2 = snd.num_states();
  auto id = [&](int p, int q, int flag) { return (p * n2 + q) * 2 + flag; };
  for (int p = 0; p < fst.num_states(); ++p)
    for (int q = 0; q < n2; ++q)
      for (int flag = 0; flag < 2; ++flag) {
        out.state_names.push_back(fst.state_names[p] + "*" +
                                  snd.state_names[q] + "#" +
                                  std::to_string(flag));
        out.accepting.push_back(flag == 0 && fst.accepting[p]);
      }
  out.initial = id(fst.initial, snd.initial, 0);
  for (const auto& t1 : fst.transitions)
    for (const auto& t2 : snd.transitions) {
      bool match = true;
      for (int i = 0; i < fst.width && match; ++i)
        if (i != j && t1.letter[i] != t2.letter[i]) match = false;
      if (!match) continue;
      TupleLetter l{t1.letter[j], t2.letter[j]};
      for (int flag = 0; flag < 2; ++flag) {
        int nf = flag;
        if (flag == 0 && fst.accepting[t1.src])
          nf = 1;
        else if (flag == 1 && snd.accepting[t2.src])
          nf = 0;
        out.transitions.push_back(
            {id(t1.src, t2.src, flag), l, id(t1.dst, t2.dst, nf)});
      }
    }
  return out;
}

Nba union_nba(const Nba& a, const Nba& b) {
  Nba out;
  out.width = a.width;
  out.sigma = a.sigma;
  out.state_names.push_back("init");
  out.accepting.push_back(false);
  int offa = 1, offb = 1 + a.num_states();
  for (int q = 0; q < a.num_states(); ++q) {
    out.state_names.push_back("l_" + a.state_names[q]);
    out.accepting.push_back(a.accepting[q]);
  }
  for (int q = 0; q < b.num_states(); ++q) {
    out.state_names.push_back("r_" + b.state_names[q]);
    out.accepting.push_back(b.accepting[q]);
  }
  for (const auto& t : a.transitions) {
    out.transitions.push_back({t.src + offa, t.letter, t.dst + offa});
    if (t.src == a.initial)
      out.transitions.push_back({0, t.letter, t.dst + offa});
  }
  for (const auto& t : b.transitions) {
    out.transitions.push_back({t.src + offb, t.letter, t.dst + offb});
    if (t.src == b.initial)
      out.transitions.push_back({0, t.letter, t.dst + offb});
  }
  return out;
}

Nba co_equiv_core(const Nba& yes, const Nba& no, int j) {
  return quotient_nba(trim(union_nba(accept_reject_product(yes, no, j),
                                     accept_reject_product(no, yes, j))));
}

}  // namespace

Nba co_equiv_nba(const Dpa& r, int j) {
  if (j < 0 || j >= r.width) throw InputError("co_equiv_nba: bad tape index");
  Nba yes = quotient_nba(trim(dpa_to_nba(r)));
  Nba no = quotient_nba(trim(dpa_to_nba(complement_dpa(r))));
  return co_equiv_core(yes, no, j);
}

Nba co_equiv_nba(const Nba& r, int j, int rank_cap, long long state_cap) {
  if (j < 0 || j >= r.width) throw InputError("co_equiv_nba: bad tape index");
  Nba yes = quotient_nba(trim(r));
  Nba no = quotient_nba(trim(complement_nba(yes, rank_cap, state_cap)));
  return co_equiv_core(yes, no, j);
}

std::vector<UpWord> expand_clique(const CliqueCertificate& c, int n) {
  auto append = [](Word* dst, const Word& s, int times = 1) {
    for (int t = 0; t < times; ++t) dst->insert(dst->end(), s.begin(), s.end());
  };
  std::vector<UpWord> out;
  for (int i = 0; i <= n; ++i) {
    UpWord w;
    if (c.kind == CliqueCertificate::Kind::kPrefix) {
      append(&w.prefix, c.u);
      append(&w.prefix, c.v, i);
      append(&w.prefix, c.w);
      append(&w.prefix, c.x, n - i);
      append(&w.prefix, c.y);
      w.period = c.z;
    } else {
      auto block = [&](const ThreeCyclesWitness& t, Word* dst) {
        append(dst, t.u);
        append(dst, t.v, i);
        append(dst, t.w);
        append(dst, t.x, n - i);
        append(dst, t.y);
      };
      w.prefix = c.z;
      for (int mIdx = 0; mIdx < c.loop_start; ++mIdx)
        block(c.chain[mIdx], &w.prefix);
      for (std::size_t mIdx = static_cast<std::size_t>(c.loop_start);
           mIdx < c.chain.size(); ++mIdx)
        block(c.chain[mIdx], &w.period);
    }
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

template <class Aut>
OmegaRecResult decide_impl(const Aut& r,
                           const std::function<Nba(int)>& co_equiv) {
  OmegaRecResult res;
  for (int j = 0; j + 1 < r.width; ++j) {
    Nba not_approx = co_equiv(j);
    if (auto cert = has_infinite_clique(not_approx)) {
      res.recognizable = false;
      res.tape = j;
      res.certificate = std::move(cert);
      return res;
    }
  }
  return res;
}

}  // namespace

OmegaRecResult decide_omega_recognizable(const Dpa& r) {
  return decide_impl(r, [&](int j) { return co_equiv_nba(r, j); });
}

OmegaRecResult decide_omega_recognizable(const Nba& r, int rank_cap,
                                         long long state_cap) {
  return decide_impl(
      r, [&](int j) { return co_equiv_nba(r, j, rank_cap, state_cap); });
}

}  // namespace relkit
