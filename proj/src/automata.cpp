#include "relkit/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace relkit {

int Dpa::num_letters() const {
  int n = 1;
  for (int i = 0; i < width; ++i) n *= sigma.size();
  return n;
}

int Dpa::letter_index(const TupleLetter& l) const {
  int idx = 0, mult = 1;
  for (int i = 0; i < width; ++i) {
    idx += l[static_cast<size_t>(i)] * mult;
    mult *= sigma.size();
  }
  return idx;
}

TupleLetter Dpa::letter_of_index(int idx) const {
  TupleLetter l(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) {
    l[static_cast<size_t>(i)] = idx % sigma.size();
    idx /= sigma.size();
  }
  return l;
}

// --- validation -------------------------------------------------------------

namespace {

void check_alphabet(const Alphabet& sigma, std::vector<std::string>& out) {
  if (sigma.size() == 0) out.push_back("alphabet is empty");
  for (const std::string& l : sigma.letters())
    if (!Alphabet::is_valid_letter_name(l))
      out.push_back("reserved or malformed alphabet letter: " + l);
}

void check_states(int n, int initial, const std::vector<bool>& finals,
                  std::vector<std::string>& out) {
  if (n == 0) out.push_back("no states");
  if (initial < 0 || initial >= n) out.push_back("initial state out of range");
  if (static_cast<int>(finals.size()) != n) out.push_back("finals size mismatch");
}

bool sym_in_range(Sym s, const Alphabet& sigma) { return s >= 0 && s < sigma.size(); }

}  // namespace

std::vector<std::string> validate(const KTapeAutomaton& a) {
  std::vector<std::string> out;
  check_alphabet(a.sigma, out);
  check_states(a.num_states(), a.initial, a.finals, out);
  if (a.arity < 1) out.push_back("arity must be >= 1");
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& t = a.transitions[i];
    if (t.src < 0 || t.src >= a.num_states() || t.dst < 0 || t.dst >= a.num_states())
      out.push_back("transition " + std::to_string(i) + " references undeclared state");
    if (static_cast<int>(t.labels.size()) != a.arity)
      out.push_back("transition " + std::to_string(i) + " label arity mismatch");
    for (const Word& w : t.labels)
      for (Sym s : w)
        if (!sym_in_range(s, a.sigma))
          out.push_back("transition " + std::to_string(i) + " label symbol out of range");
  }
  return out;
}

std::vector<std::string> validate(const Mdfa& a) {
  std::vector<std::string> out;
  check_alphabet(a.sigma, out);
  check_states(a.num_states(), a.initial, a.finals, out);
  if (a.arity < 1) out.push_back("arity must be >= 1");
  if (static_cast<int>(a.tape_of.size()) != a.num_states())
    out.push_back("state ownership not a partition (size mismatch)");
  for (size_t q = 0; q < a.tape_of.size(); ++q)
    if (a.tape_of[q] < 0 || a.tape_of[q] >= a.arity)
      out.push_back("state " + std::to_string(q) + " tape out of range");
  if (static_cast<int>(a.delta.size()) != a.num_states() ||
      static_cast<int>(a.delta_end.size()) != a.num_states()) {
    out.push_back("transition table size mismatch");
    return out;
  }
  for (int q = 0; q < a.num_states(); ++q) {
    if (static_cast<int>(a.delta[static_cast<size_t>(q)].size()) != a.sigma.size()) {
      out.push_back("transition function not total at state " + std::to_string(q));
      continue;
    }
    for (int c = 0; c < a.sigma.size(); ++c) {
      int d = a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
      if (d < 0 || d >= a.num_states())
        out.push_back("delta out of range at state " + std::to_string(q));
    }
    if (a.delta_end[static_cast<size_t>(q)] < 0 || a.delta_end[static_cast<size_t>(q)] >= a.num_states())
      out.push_back("end transition out of range at state " + std::to_string(q));
  }
  return out;
}

std::vector<std::string> validate(const Dfa& a) {
  std::vector<std::string> out;
  check_alphabet(a.sigma, out);
  check_states(a.num_states(), a.initial, a.finals, out);
  if (static_cast<int>(a.delta.size()) != a.num_states())
    out.push_back("transition table size mismatch");
  else
    for (int q = 0; q < a.num_states(); ++q) {
      if (static_cast<int>(a.delta[static_cast<size_t>(q)].size()) != a.sigma.size()) {
        out.push_back("DFA not complete at state " + std::to_string(q));
        continue;
      }
      for (int d : a.delta[static_cast<size_t>(q)])
        if (d < 0 || d >= a.num_states()) out.push_back("delta out of range");
    }
  return out;
}

std::vector<std::string> validate(const IndependentKTape& a) {
  std::vector<std::string> out;
  if (a.arity < 1) out.push_back("arity must be >= 1");
  if (static_cast<int>(a.components.size()) != a.arity)
    out.push_back("component count != arity");
  for (const Dfa& d : a.components) {
    auto v = validate(d);
    out.insert(out.end(), v.begin(), v.end());
    if (!(d.sigma == a.sigma)) out.push_back("component alphabet mismatch");
  }
  for (const auto& t : a.final_tuples) {
    if (t.size() != a.components.size()) {
      out.push_back("final tuple arity mismatch");
      continue;
    }
    for (size_t i = 0; i < t.size(); ++i)
      if (t[i] < 0 || t[i] >= a.components[i].num_states())
        out.push_back("final tuple references invalid state");
  }
  return out;
}

std::vector<std::string> validate(const Nba& a) {
  std::vector<std::string> out;
  check_alphabet(a.sigma, out);
  check_states(a.num_states(), a.initial, a.accepting, out);
  if (a.width < 1) out.push_back("width must be >= 1");
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& t = a.transitions[i];
    if (t.src < 0 || t.src >= a.num_states() || t.dst < 0 || t.dst >= a.num_states())
      out.push_back("transition " + std::to_string(i) + " references undeclared state");
    if (static_cast<int>(t.letter.size()) != a.width)
      out.push_back("transition " + std::to_string(i) + " letter width mismatch");
    else
      for (Sym s : t.letter)
        if (!sym_in_range(s, a.sigma))
          out.push_back("transition " + std::to_string(i) + " symbol out of range");
  }
  return out;
}

std::vector<std::string> validate(const Dpa& a) {
  std::vector<std::string> out;
  check_alphabet(a.sigma, out);
  if (a.width < 1) out.push_back("width must be >= 1");
  if (a.num_states() == 0) out.push_back("no states");
  if (a.initial < 0 || a.initial >= a.num_states()) out.push_back("initial out of range");
  if (static_cast<int>(a.priority.size()) != a.num_states())
    out.push_back("priority size mismatch");
  for (int p : a.priority)
    if (p < 0 || p > 2 * a.num_states()) out.push_back("priority out of bounds");
  if (static_cast<int>(a.delta.size()) != a.num_states())
    out.push_back("transition table size mismatch");
  else
    for (int q = 0; q < a.num_states(); ++q) {
      if (static_cast<int>(a.delta[static_cast<size_t>(q)].size()) != a.num_letters()) {
        out.push_back("DPA transition function not total at state " + std::to_string(q));
        continue;
      }
      for (int d : a.delta[static_cast<size_t>(q)])
        if (d < 0 || d >= a.num_states()) out.push_back("delta out of range");
    }
  return out;
}

// --- trim -------------------------------------------------------------------

KTapeAutomaton trim(const KTapeAutomaton& a) {
  std::vector<bool> reach(static_cast<size_t>(a.num_states()), false);
  std::deque<int> bfs{a.initial};
  reach[static_cast<size_t>(a.initial)] = true;
  std::vector<std::vector<int>> succ(static_cast<size_t>(a.num_states()));
  for (const auto& t : a.transitions) succ[static_cast<size_t>(t.src)].push_back(t.dst);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    for (int d : succ[static_cast<size_t>(q)])
      if (!reach[static_cast<size_t>(d)]) {
        reach[static_cast<size_t>(d)] = true;
        bfs.push_back(d);
      }
  }
  KTapeAutomaton out;
  out.arity = a.arity;
  out.sigma = a.sigma;
  std::vector<int> remap(static_cast<size_t>(a.num_states()), -1);
  for (int q = 0; q < a.num_states(); ++q)
    if (reach[static_cast<size_t>(q)]) {
      remap[static_cast<size_t>(q)] = static_cast<int>(out.state_names.size());
      out.state_names.push_back(a.state_names[static_cast<size_t>(q)]);
      out.finals.push_back(a.finals[static_cast<size_t>(q)]);
    }
  out.initial = remap[static_cast<size_t>(a.initial)];
  for (const auto& t : a.transitions)
    if (reach[static_cast<size_t>(t.src)] && reach[static_cast<size_t>(t.dst)])
      out.transitions.push_back({remap[static_cast<size_t>(t.src)], t.labels,
                                 remap[static_cast<size_t>(t.dst)]});
  return out;
}

SccInfo strongly_connected(const std::vector<std::vector<int>>& succ) {
  int n = static_cast<int>(succ.size());
  SccInfo res;
  res.comp.assign(static_cast<size_t>(n), -1);
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<int> stack;
  int next_index = 0;
  // Iterative DFS to avoid deep recursion.
  struct Frame {
    int v;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < succ[static_cast<size_t>(f.v)].size()) {
        int w = succ[static_cast<size_t>(f.v)][f.edge++];
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = true;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)],
                                                   index[static_cast<size_t>(w)]);
        }
      } else {
        if (low[static_cast<size_t>(f.v)] == index[static_cast<size_t>(f.v)]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = false;
            res.comp[static_cast<size_t>(w)] = res.count;
            if (w == f.v) break;
          }
          res.count++;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[static_cast<size_t>(frames.back().v)] =
              std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
      }
    }
  }
  return res;
}

Nba trim(const Nba& a) {
  int n = a.num_states();
  std::vector<std::vector<int>> succ(static_cast<size_t>(n)), pred(static_cast<size_t>(n));
  for (const auto& t : a.transitions) {
    succ[static_cast<size_t>(t.src)].push_back(t.dst);
    pred[static_cast<size_t>(t.dst)].push_back(t.src);
  }
  std::vector<bool> reach(static_cast<size_t>(n), false);
  std::deque<int> bfs{a.initial};
  reach[static_cast<size_t>(a.initial)] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    for (int d : succ[static_cast<size_t>(q)])
      if (!reach[static_cast<size_t>(d)]) {
        reach[static_cast<size_t>(d)] = true;
        bfs.push_back(d);
      }
  }
  // States on a cycle through an accepting state; then backward closure.
  SccInfo scc = strongly_connected(succ);
  std::vector<bool> scc_cyclic(static_cast<size_t>(scc.count), false);
  std::vector<int> scc_size(static_cast<size_t>(scc.count), 0);
  for (int q = 0; q < n; ++q) scc_size[static_cast<size_t>(scc.comp[static_cast<size_t>(q)])]++;
  for (const auto& t : a.transitions) {
    if (scc.comp[static_cast<size_t>(t.src)] == scc.comp[static_cast<size_t>(t.dst)] &&
        (t.src != t.dst || true)) {
      if (scc_size[static_cast<size_t>(scc.comp[static_cast<size_t>(t.src)])] > 1 || t.src == t.dst)
        scc_cyclic[static_cast<size_t>(scc.comp[static_cast<size_t>(t.src)])] = true;
    }
  }
  std::vector<bool> live(static_cast<size_t>(n), false);
  std::deque<int> back;
  for (int q = 0; q < n; ++q)
    if (reach[static_cast<size_t>(q)] && a.accepting[static_cast<size_t>(q)] &&
        scc_cyclic[static_cast<size_t>(scc.comp[static_cast<size_t>(q)])]) {
      live[static_cast<size_t>(q)] = true;
      back.push_back(q);
    }
  while (!back.empty()) {
    int q = back.front();
    back.pop_front();
    for (int p : pred[static_cast<size_t>(q)])
      if (reach[static_cast<size_t>(p)] && !live[static_cast<size_t>(p)]) {
        live[static_cast<size_t>(p)] = true;
        back.push_back(p);
      }
  }
  Nba out;
  out.width = a.width;
  out.sigma = a.sigma;
  std::vector<int> remap(static_cast<size_t>(n), -1);
  for (int q = 0; q < n; ++q)
    if (live[static_cast<size_t>(q)] || q == a.initial) {
      remap[static_cast<size_t>(q)] = static_cast<int>(out.state_names.size());
      out.state_names.push_back(a.state_names[static_cast<size_t>(q)]);
      out.accepting.push_back(a.accepting[static_cast<size_t>(q)]);
    }
  out.initial = remap[static_cast<size_t>(a.initial)];
  for (const auto& t : a.transitions)
    if (remap[static_cast<size_t>(t.src)] != -1 && live[static_cast<size_t>(t.dst)])
      out.transitions.push_back({remap[static_cast<size_t>(t.src)], t.letter,
                                 remap[static_cast<size_t>(t.dst)]});
  return out;
}

Mdfa reachable_part(const Mdfa& a) {
  int n = a.num_states();
  std::vector<bool> reach(static_cast<size_t>(n), false);
  std::deque<int> bfs{a.initial};
  reach[static_cast<size_t>(a.initial)] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    auto visit = [&](int d) {
      if (!reach[static_cast<size_t>(d)]) {
        reach[static_cast<size_t>(d)] = true;
        bfs.push_back(d);
      }
    };
    for (int c = 0; c < a.sigma.size(); ++c) visit(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)]);
    visit(a.delta_end[static_cast<size_t>(q)]);
  }
  Mdfa out;
  out.arity = a.arity;
  out.sigma = a.sigma;
  std::vector<int> remap(static_cast<size_t>(n), -1);
  for (int q = 0; q < n; ++q)
    if (reach[static_cast<size_t>(q)]) {
      remap[static_cast<size_t>(q)] = static_cast<int>(out.state_names.size());
      out.state_names.push_back(a.state_names[static_cast<size_t>(q)]);
      out.tape_of.push_back(a.tape_of[static_cast<size_t>(q)]);
      out.finals.push_back(a.finals[static_cast<size_t>(q)]);
    }
  out.initial = remap[static_cast<size_t>(a.initial)];
  for (int q = 0; q < n; ++q) {
    if (!reach[static_cast<size_t>(q)]) continue;
    std::vector<int> row;
    row.reserve(static_cast<size_t>(a.sigma.size()));
    for (int c = 0; c < a.sigma.size(); ++c)
      row.push_back(remap[static_cast<size_t>(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)])]);
    out.delta.push_back(std::move(row));
    out.delta_end.push_back(remap[static_cast<size_t>(a.delta_end[static_cast<size_t>(q)])]);
  }
  return out;
}

// --- membership --------------------------------------------------------------

bool member_det(const Mdfa& a, const WordTuple& u) {
  if (static_cast<int>(u.size()) != a.arity) throw InputError("member_det: arity mismatch");
  std::vector<size_t> pos(u.size(), 0);
  std::vector<bool> ended(u.size(), false);
  int cur = a.initial;
  while (true) {
    int t = a.tape_of[static_cast<size_t>(cur)];
    if (pos[static_cast<size_t>(t)] < u[static_cast<size_t>(t)].size()) {
      cur = a.delta[static_cast<size_t>(cur)]
                   [static_cast<size_t>(u[static_cast<size_t>(t)][pos[static_cast<size_t>(t)]])];
      pos[static_cast<size_t>(t)]++;
    } else if (!ended[static_cast<size_t>(t)]) {
      cur = a.delta_end[static_cast<size_t>(cur)];
      ended[static_cast<size_t>(t)] = true;
    } else {
      break;  // demanded tape exhausted -> run halts
    }
  }
  for (bool e : ended)
    if (!e) return false;
  return a.finals[static_cast<size_t>(cur)];
}

bool member_nondet(const KTapeAutomaton& a, const WordTuple& u) {
  if (static_cast<int>(u.size()) != a.arity) throw InputError("member_nondet: arity mismatch");
  std::vector<std::vector<const KTapeAutomaton::Trans*>> from(static_cast<size_t>(a.num_states()));
  for (const auto& t : a.transitions) from[static_cast<size_t>(t.src)].push_back(&t);
  std::set<std::vector<int>> visited;
  std::deque<std::vector<int>> bfs;
  std::vector<int> init(u.size() + 1, 0);
  init[0] = a.initial;
  bfs.push_back(init);
  visited.insert(init);
  while (!bfs.empty()) {
    std::vector<int> cfg = bfs.front();
    bfs.pop_front();
    int q = cfg[0];
    bool at_end = true;
    for (size_t i = 0; i < u.size(); ++i)
      if (static_cast<size_t>(cfg[i + 1]) != u[i].size()) at_end = false;
    if (at_end && a.finals[static_cast<size_t>(q)]) return true;
    for (const auto* t : from[static_cast<size_t>(q)]) {
      std::vector<int> next = cfg;
      next[0] = t->dst;
      bool ok = true;
      for (size_t i = 0; ok && i < u.size(); ++i) {
        const Word& lab = t->labels[i];
        size_t p = static_cast<size_t>(cfg[i + 1]);
        if (p + lab.size() > u[i].size()) {
          ok = false;
          break;
        }
        for (size_t j = 0; j < lab.size(); ++j)
          if (u[i][p + j] != lab[j]) {
            ok = false;
            break;
          }
        next[i + 1] = static_cast<int>(p + lab.size());
      }
      if (ok && visited.insert(next).second) bfs.push_back(next);
    }
  }
  return false;
}

bool member_dfa(const Dfa& d, const Word& w) {
  int q = d.initial;
  for (Sym c : w) q = d.delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
  return d.finals[static_cast<size_t>(q)];
}

bool member_independent(const IndependentKTape& i, const WordTuple& u) {
  if (u.size() != i.components.size()) throw InputError("member_independent: arity mismatch");
  std::vector<int> reached;
  reached.reserve(u.size());
  for (size_t c = 0; c < u.size(); ++c) {
    int q = i.components[c].initial;
    for (Sym s : u[c]) q = i.components[c].delta[static_cast<size_t>(q)][static_cast<size_t>(s)];
    reached.push_back(q);
  }
  return i.final_tuples.count(reached) > 0;
}

// --- permutation --------------------------------------------------------------

WordTuple permute_tuple(const WordTuple& u, const std::vector<int>& perm) {
  WordTuple out(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) out[i] = u.at(static_cast<size_t>(perm[i]));
  return out;
}

Mdfa permute_tapes(const Mdfa& a, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != a.arity) throw InputError("permute_tapes: bad permutation");
  std::vector<int> inv(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
  Mdfa out = a;
  for (auto& t : out.tape_of) t = inv[static_cast<size_t>(t)];
  return out;
}

KTapeAutomaton permute_tapes(const KTapeAutomaton& a, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != a.arity) throw InputError("permute_tapes: bad permutation");
  KTapeAutomaton out = a;
  for (auto& t : out.transitions) t.labels = permute_tuple(t.labels, perm);
  return out;
}

// --- plain view ----------------------------------------------------------------

namespace {
int mask_with(int mask, int t) { return mask | (1 << t); }
bool mask_has(int mask, int t) { return (mask >> t) & 1; }
}  // namespace

PlainDet make_plain(const Mdfa& a) {
  PlainDet p;
  p.arity = a.arity;
  p.gamma = a.sigma;
  std::string ename = p.gamma.fresh_name("%");
  p.emark = p.gamma.add(ename);
  int full = (1 << a.arity) - 1;
  // State key: q * 2^k + emask; plus a dead state appended last.
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> keys;
  auto intern = [&](int q, int mask) {
    auto it = ids.find({q, mask});
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(keys.size());
    ids[{q, mask}] = id;
    keys.push_back({q, mask});
    return id;
  };
  intern(a.initial, 0);
  std::vector<std::vector<int>> rows;
  for (size_t qi = 0; qi < keys.size(); ++qi) {
    auto [q, mask] = keys[qi];
    int t = a.tape_of[static_cast<size_t>(q)];
    std::vector<int> row(static_cast<size_t>(p.gamma.size()), -2);  // -2 = dead
    if (!mask_has(mask, t)) {
      for (int c = 0; c < a.sigma.size(); ++c)
        row[static_cast<size_t>(c)] =
            intern(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)], mask);
      row[static_cast<size_t>(p.emark)] =
          intern(a.delta_end[static_cast<size_t>(q)], mask_with(mask, t));
    }
    rows.push_back(std::move(row));
  }
  int dead = static_cast<int>(keys.size());
  for (size_t qi = 0; qi < keys.size(); ++qi) {
    auto [q, mask] = keys[qi];
    p.state_names.push_back(a.state_names[static_cast<size_t>(q)] + "/" + std::to_string(mask));
    // Once a state's own tape has ended it can never consume input again; make
    // it read the front tape (into dead) so runs never block. This keeps
    // membership unchanged but makes every run schedule total, which the
    // witness pattern search relies on.
    p.tape_of.push_back(mask_has(mask, a.tape_of[static_cast<size_t>(q)])
                            ? 0
                            : a.tape_of[static_cast<size_t>(q)]);
    p.finals.push_back(mask == full && a.finals[static_cast<size_t>(q)]);
    for (auto& d : rows[qi])
      if (d == -2) d = dead;
    p.delta.push_back(rows[qi]);
  }
  p.state_names.push_back("dead");
  p.tape_of.push_back(0);
  p.finals.push_back(false);
  p.delta.push_back(std::vector<int>(static_cast<size_t>(p.gamma.size()), dead));
  p.dead = dead;
  p.initial = 0;
  return p;
}

bool member_plain_from(const PlainDet& p, int q, const WordTuple& u) {
  if (static_cast<int>(u.size()) != p.arity) throw InputError("member_plain_from: arity mismatch");
  std::vector<size_t> pos(u.size(), 0);
  int cur = q;
  while (true) {
    int t = p.tape_of[static_cast<size_t>(cur)];
    if (pos[static_cast<size_t>(t)] < u[static_cast<size_t>(t)].size()) {
      cur = p.delta[static_cast<size_t>(cur)]
                   [static_cast<size_t>(u[static_cast<size_t>(t)][pos[static_cast<size_t>(t)]])];
      pos[static_cast<size_t>(t)]++;
    } else {
      break;
    }
  }
  for (size_t i = 0; i < u.size(); ++i)
    if (pos[i] != u[i].size()) return false;
  return p.finals[static_cast<size_t>(cur)];
}

Mdfa endmark_wrap(const PlainDet& p, int root) {
  int k = p.arity;
  int full = (1 << k) - 1;
  DetBuild b;
  b.arity = k;
  b.sigma = p.gamma;
  // Key: {state, donemask}.
  b.owner = [&, k](const std::vector<int>& key) {
    int q = key[0], mask = key[1];
    int t = p.tape_of[static_cast<size_t>(q)];
    if (!mask_has(mask, t)) return t;
    for (int i = 0; i < k; ++i)
      if (!mask_has(mask, i)) return i;
    return 0;
  };
  b.step = [&, k, full](const std::vector<int>& key, Sym c) -> std::optional<std::vector<int>> {
    int q = key[0], mask = key[1];
    if (mask == full) return std::nullopt;
    int t = p.tape_of[static_cast<size_t>(q)];
    if (!mask_has(mask, t)) {
      if (c == kEnd) return std::vector<int>{q, mask_with(mask, t)};
      return std::vector<int>{p.delta[static_cast<size_t>(q)][static_cast<size_t>(c)], mask};
    }
    // Ending chain: only endmarkers of the remaining tapes are allowed.
    if (c != kEnd) return std::nullopt;
    for (int i = 0; i < k; ++i)
      if (!mask_has(mask, i)) return std::vector<int>{q, mask_with(mask, i)};
    return std::nullopt;
  };
  b.is_final = [&, full](const std::vector<int>& key) {
    return key[1] == full && p.finals[static_cast<size_t>(key[0])];
  };
  return build_det(b, {root, 0}, 1'000'000);
}

// --- nondeterministic view -------------------------------------------------------

KTapeAutomaton as_nondet(const Mdfa& a) {
  KTapeAutomaton out;
  out.arity = a.arity;
  out.sigma = a.sigma;
  int full = (1 << a.arity) - 1;
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> keys;
  std::deque<int> todo;
  auto intern = [&](int q, int mask) {
    auto it = ids.find({q, mask});
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(keys.size());
    ids[{q, mask}] = id;
    keys.push_back({q, mask});
    out.state_names.push_back(a.state_names[static_cast<size_t>(q)] + "/" + std::to_string(mask));
    out.finals.push_back(mask == full && a.finals[static_cast<size_t>(q)]);
    todo.push_back(id);
    return id;
  };
  out.initial = intern(a.initial, 0);
  while (!todo.empty()) {
    int id = todo.front();
    todo.pop_front();
    auto [q, mask] = keys[static_cast<size_t>(id)];
    int t = a.tape_of[static_cast<size_t>(q)];
    if (mask_has(mask, t)) continue;  // stuck: tape already ended
    for (int c = 0; c < a.sigma.size(); ++c) {
      WordTuple labels(static_cast<size_t>(a.arity));
      labels[static_cast<size_t>(t)] = {c};
      int dst = intern(a.delta[static_cast<size_t>(q)][static_cast<size_t>(c)], mask);
      out.transitions.push_back({id, labels, dst});
    }
    // Guessed end of tape t: epsilon move applying the endmarker column.
    WordTuple eps(static_cast<size_t>(a.arity));
    int dst = intern(a.delta_end[static_cast<size_t>(q)], mask_with(mask, t));
    out.transitions.push_back({id, eps, dst});
  }
  return out;
}

// --- generic deterministic construction ---------------------------------------------

Mdfa build_det(const DetBuild& b, const std::vector<int>& init, long long state_cap) {
  Mdfa out;
  out.arity = b.arity;
  out.sigma = b.sigma;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> keys;
  std::deque<int> todo;
  int dead = -1;
  auto intern = [&](const std::vector<int>& key) {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(keys.size());
    if (static_cast<long long>(id) >= state_cap)
      throw BudgetError("build_det: state cap exceeded", state_cap);
    ids[key] = id;
    keys.push_back(key);
    todo.push_back(id);
    return id;
  };
  intern(init);
  std::vector<std::vector<int>> rows;
  std::vector<int> end_col;
  std::vector<int> owners;
  std::vector<bool> fin;
  while (!todo.empty()) {
    int id = todo.front();
    todo.pop_front();
    const std::vector<int> key = keys[static_cast<size_t>(id)];  // copy: keys may grow
    if (static_cast<int>(rows.size()) <= id) {
      rows.resize(static_cast<size_t>(id) + 1);
      end_col.resize(static_cast<size_t>(id) + 1, -2);
      owners.resize(static_cast<size_t>(id) + 1, 0);
      fin.resize(static_cast<size_t>(id) + 1, false);
    }
    owners[static_cast<size_t>(id)] = b.owner(key);
    fin[static_cast<size_t>(id)] = b.is_final(key);
    std::vector<int> row(static_cast<size_t>(b.sigma.size()), -2);
    for (int c = 0; c < b.sigma.size(); ++c) {
      auto nxt = b.step(key, c);
      if (nxt) row[static_cast<size_t>(c)] = intern(*nxt);
    }
    auto nxt = b.step(key, kEnd);
    end_col[static_cast<size_t>(id)] = nxt ? intern(*nxt) : -2;
    rows[static_cast<size_t>(id)] = std::move(row);
  }
  // Some interned states may be beyond rows if discovered late; process until fixpoint
  // is already guaranteed by the queue; now materialize the dead sink if used.
  int n = static_cast<int>(keys.size());
  bool need_dead = false;
  rows.resize(static_cast<size_t>(n));
  end_col.resize(static_cast<size_t>(n), -2);
  owners.resize(static_cast<size_t>(n), 0);
  fin.resize(static_cast<size_t>(n), false);
  for (int q = 0; q < n; ++q) {
    for (int d : rows[static_cast<size_t>(q)])
      if (d == -2) need_dead = true;
    if (end_col[static_cast<size_t>(q)] == -2) need_dead = true;
  }
  dead = n;
  for (int q = 0; q < n; ++q) {
    out.state_names.push_back("s" + std::to_string(q));
    out.tape_of.push_back(owners[static_cast<size_t>(q)]);
    out.finals.push_back(fin[static_cast<size_t>(q)]);
    for (auto& d : rows[static_cast<size_t>(q)])
      if (d == -2) d = dead;
    out.delta.push_back(rows[static_cast<size_t>(q)]);
    out.delta_end.push_back(end_col[static_cast<size_t>(q)] == -2 ? dead
                                                                  : end_col[static_cast<size_t>(q)]);
  }
  if (need_dead) {
    out.state_names.push_back("dead");
    out.tape_of.push_back(0);
    out.finals.push_back(false);
    out.delta.push_back(std::vector<int>(static_cast<size_t>(b.sigma.size()), dead));
    out.delta_end.push_back(dead);
  }
  out.initial = 0;
  return out;
}

}  // namespace relkit
