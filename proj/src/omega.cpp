#include "relkit/omega.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace relkit {

Dpa complement_dpa(const Dpa& d) {
  Dpa out = d;
  for (int& p : out.priority) ++p;
  return out;
}

Nba dpa_to_nba(const Dpa& d) {
  Nba out;
  out.width = d.width;
  out.sigma = d.sigma;
  out.initial = d.initial;
  int n = d.num_states();
  // Even priorities that actually occur; only those can be the eventual
  // minimum of a run's priority sequence.
  std::vector<int> evens;
  for (int q = 0; q < n; ++q) {
    int p = d.priority[q];
    if (p % 2 == 0 && std::find(evens.begin(), evens.end(), p) == evens.end())
      evens.push_back(p);
  }
  std::sort(evens.begin(), evens.end());
  // Plain copies first, then one block of (state, p) pairs per even p.
  out.state_names = d.state_names;
  out.accepting.assign(n, false);
  std::vector<std::vector<int>> block(evens.size());
  for (std::size_t bi = 0; bi < evens.size(); ++bi) {
    block[bi].resize(n);
    for (int q = 0; q < n; ++q) {
      block[bi][q] = static_cast<int>(out.state_names.size());
      out.state_names.push_back(d.state_names[q] + "@" +
                                std::to_string(evens[bi]));
      out.accepting.push_back(d.priority[q] == evens[bi]);
    }
  }
  int nl = d.num_letters();
  for (int q = 0; q < n; ++q) {
    for (int li = 0; li < nl; ++li) {
      int dst = d.delta[q][li];
      TupleLetter l = d.letter_of_index(li);
      out.transitions.push_back({q, l, dst});
      for (std::size_t bi = 0; bi < evens.size(); ++bi) {
        // Guess here that from now on no priority below evens[bi] occurs.
        if (d.priority[dst] >= evens[bi])
          out.transitions.push_back({q, l, block[bi][dst]});
      }
    }
  }
  for (std::size_t bi = 0; bi < evens.size(); ++bi) {
    for (int q = 0; q < n; ++q) {
      for (int li = 0; li < nl; ++li) {
        int dst = d.delta[q][li];
        if (d.priority[dst] >= evens[bi])
          out.transitions.push_back(
              {block[bi][q], d.letter_of_index(li), block[bi][dst]});
      }
    }
  }
  return out;
}

namespace {

// Mixed-radix index of a padding-free tuple letter, mirroring Dpa's scheme.
int tuple_index(const TupleLetter& l, int sigma_size) {
  int idx = 0;
  for (int i = static_cast<int>(l.size()) - 1; i >= 0; --i)
    idx = idx * sigma_size + l[i];
  return idx;
}

TupleLetter tuple_of_index(int idx, int width, int sigma_size) {
  TupleLetter l(width);
  for (int i = 0; i < width; ++i) {
    l[i] = idx % sigma_size;
    idx /= sigma_size;
  }
  return l;
}

}  // namespace

Nba complement_nba(const Nba& b, int rank_cap, long long state_cap) {
  int n = b.num_states();
  int max_rank = 2 * n;
  if (rank_cap < max_rank)
    throw InputError("complement_nba: rank_cap must be at least twice the state count");
  int sigma_size = static_cast<int>(b.sigma.size());
  int nl = 1;
  for (int i = 0; i < b.width; ++i) nl *= sigma_size;
  // succ[q][letter] = successor states.
  std::vector<std::vector<std::vector<int>>> succ(
      n, std::vector<std::vector<int>>(nl));
  for (const auto& t : b.transitions)
    succ[t.src][tuple_index(t.letter, sigma_size)].push_back(t.dst);

  // A complement state is a level ranking (per-state rank, -1 = absent) plus
  // an obligation set of states that still owe a move to an odd rank; the
  // whole level is accepting when that set is empty.
  using Key = std::vector<int>;  // n ranks followed by n obligation bits
  std::map<Key, int> intern;
  std::vector<Key> keys;
  Nba out;
  out.width = b.width;
  out.sigma = b.sigma;
  auto add_state = [&](const Key& k) {
    auto it = intern.find(k);
    if (it != intern.end()) return it->second;
    if (static_cast<long long>(keys.size()) >= state_cap)
      throw BudgetError("complement_nba: state budget exceeded",
                        static_cast<long long>(keys.size()) + 1);
    int id = static_cast<int>(keys.size());
    intern.emplace(k, id);
    keys.push_back(k);
    out.state_names.push_back("c" + std::to_string(id));
    bool obligation_empty = true;
    for (int q = 0; q < n; ++q) obligation_empty &= k[n + q] == 0;
    out.accepting.push_back(obligation_empty);
    return id;
  };
  Key init(2 * n, 0);
  for (int q = 0; q < n; ++q) init[q] = -1;
  init[b.initial] = max_rank;
  out.initial = add_state(init);
  std::queue<int> work;
  work.push(out.initial);
  std::set<int> queued{out.initial};
  while (!work.empty()) {
    int src = work.front();
    work.pop();
    Key cur = keys[src];
    bool obligation_empty = true;
    for (int q = 0; q < n; ++q) obligation_empty &= cur[n + q] == 0;
    for (int li = 0; li < nl; ++li) {
      // Rank bound for each successor: the smallest rank among predecessors.
      std::vector<int> bound(n, -1);
      for (int q = 0; q < n; ++q) {
        if (cur[q] < 0) continue;
        for (int q2 : succ[q][li])
          if (bound[q2] < 0 || cur[q] < bound[q2]) bound[q2] = cur[q];
      }
      std::vector<int> dom;
      for (int q = 0; q < n; ++q)
        if (bound[q] >= 0) dom.push_back(q);
      // Enumerate every ranking below the bounds, even-only on accepting
      // states, odometer style.
      std::vector<int> pick(dom.size(), 0);
      for (std::size_t i = 0; i < dom.size(); ++i)
        if (b.accepting[dom[i]] && pick[i] % 2 != 0) ++pick[i];
      bool more = true;
      while (more) {
        bool feasible = true;
        for (std::size_t i = 0; i < dom.size(); ++i)
          if (pick[i] > bound[dom[i]]) feasible = false;
        if (feasible) {
          Key nxt(2 * n, 0);
          for (int q = 0; q < n; ++q) nxt[q] = -1;
          for (std::size_t i = 0; i < dom.size(); ++i) nxt[dom[i]] = pick[i];
          if (!obligation_empty) {
            for (int q = 0; q < n; ++q) {
              if (cur[n + q] == 0) continue;
              for (int q2 : succ[q][li])
                if (nxt[q2] >= 0 && nxt[q2] % 2 == 0) nxt[n + q2] = 1;
            }
          } else {
            for (int q = 0; q < n; ++q)
              if (nxt[q] >= 0 && nxt[q] % 2 == 0) nxt[n + q] = 1;
          }
          int dst = add_state(nxt);
          out.transitions.push_back(
              {src, tuple_of_index(li, b.width, sigma_size), dst});
          if (!queued.count(dst)) {
            queued.insert(dst);
            work.push(dst);
          }
        }
        // Advance the odometer, stepping accepting states by two.
        more = false;
        for (std::size_t i = 0; i < dom.size(); ++i) {
          pick[i] += b.accepting[dom[i]] ? 2 : 1;
          if (pick[i] <= bound[dom[i]]) {
            more = true;
            break;
          }
          pick[i] = 0;
        }
        if (dom.empty()) more = false;  // single empty ranking: all runs died
      }
    }
  }
  return out;
}

Nba product_nba(const Nba& b1, const Nba& b2) {
  if (b1.width != b2.width || b1.sigma.size() != b2.sigma.size())
    throw InputError("product_nba: alphabet mismatch");
  Nba out;
  out.width = b1.width;
  out.sigma = b1.sigma;
  int n2 = b2.num_states();
  auto id = [&](int q1, int q2, int flag) { return (q1 * n2 + q2) * 2 + flag; };
  for (int q1 = 0; q1 < b1.num_states(); ++q1)
    for (int q2 = 0; q2 < n2; ++q2)
      for (int flag = 0; flag < 2; ++flag) {
        out.state_names.push_back(b1.state_names[q1] + "*" +
                                  b2.state_names[q2] + "#" +
                                  std::to_string(flag));
        out.accepting.push_back(flag == 0 && b1.accepting[q1]);
      }
  out.initial = id(b1.initial, b2.initial, 0);
  for (const auto& t1 : b1.transitions)
    for (const auto& t2 : b2.transitions) {
      if (t1.letter != t2.letter) continue;
      for (int flag = 0; flag < 2; ++flag) {
        int nf = flag;
        if (flag == 0 && b1.accepting[t1.src])
          nf = 1;
        else if (flag == 1 && b2.accepting[t2.src])
          nf = 0;
        out.transitions.push_back(
            {id(t1.src, t2.src, flag), t1.letter, id(t1.dst, t2.dst, nf)});
      }
    }
  return out;
}

bool is_empty_nba(const Nba& b) {
  int n = b.num_states();
  std::vector<std::vector<int>> adj(n);
  std::vector<bool> self(n, false);
  for (const auto& t : b.transitions) {
    adj[t.src].push_back(t.dst);
    if (t.src == t.dst) self[t.src] = true;
  }
  std::vector<bool> reach(n, false);
  std::queue<int> bfs;
  bfs.push(b.initial);
  reach[b.initial] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int d : adj[q])
      if (!reach[d]) {
        reach[d] = true;
        bfs.push(d);
      }
  }
  SccInfo scc = strongly_connected(adj);
  std::vector<int> size(scc.count, 0);
  for (int q = 0; q < n; ++q) ++size[scc.comp[q]];
  for (int q = 0; q < n; ++q)
    if (reach[q] && b.accepting[q] && (size[scc.comp[q]] > 1 || self[q]))
      return false;
  return true;
}

Nba quotient_nba(const Nba& b) {
  int n = b.num_states();
  int ss = static_cast<int>(b.sigma.size());
  std::vector<int> blk(n);
  for (int q = 0; q < n; ++q) blk[q] = b.accepting[q] ? 1 : 0;
  for (;;) {
    // Signature: own block plus the set of (letter, successor block) moves.
    std::map<std::pair<int, std::set<std::pair<int, int>>>, int> sig_ids;
    std::vector<std::set<std::pair<int, int>>> moves(n);
    for (const auto& t : b.transitions)
      moves[t.src].insert({tuple_index(t.letter, ss), blk[t.dst]});
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      auto key = std::make_pair(blk[q], std::move(moves[q]));
      auto it = sig_ids.find(key);
      if (it == sig_ids.end())
        it = sig_ids.emplace(std::move(key),
                             static_cast<int>(sig_ids.size()))
                 .first;
      next[q] = it->second;
    }
    if (next == blk) break;
    blk = std::move(next);
  }
  int blocks = 1 + *std::max_element(blk.begin(), blk.end());
  Nba out;
  out.width = b.width;
  out.sigma = b.sigma;
  out.state_names.assign(blocks, "");
  out.accepting.assign(blocks, false);
  for (int q = n - 1; q >= 0; --q) {
    out.state_names[blk[q]] = b.state_names[q];
    out.accepting[blk[q]] = b.accepting[q];
  }
  out.initial = blk[b.initial];
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& t : b.transitions)
    if (seen.insert({blk[t.src], tuple_index(t.letter, ss), blk[t.dst]})
            .second)
      out.transitions.push_back({blk[t.src], t.letter, blk[t.dst]});
  return out;
}

}  // namespace relkit
