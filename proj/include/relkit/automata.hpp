// automata.hpp -- automaton types, validation, trimming, membership, and a
// generic on-the-fly builder for deterministic multitape machines.
#ifndef RELKIT_AUTOMATA_HPP
#define RELKIT_AUTOMATA_HPP

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "relkit/core.hpp"

namespace relkit {

// Nondeterministic k-tape automaton; transitions are labeled with word
// tuples, acceptance is a run from the initial to a final state that reads
// exactly the input tuple (no endmarkers).
struct KTapeAutomaton {
  int arity = 1;
  Alphabet sigma;
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<bool> finals;
  struct Trans {
    int src;
    WordTuple labels;
    int dst;
  };
  std::vector<Trans> transitions;
  int num_states() const { return static_cast<int>(state_names.size()); }
};

// Deterministic k-tape automaton. Each state owns one tape and consumes its
// next symbol; delta is total over the alphabet plus the endmarker. The
// recognized relation is over end-marked inputs: u is accepted iff the run
// on (u1.,...,uk.) consumes every tape completely and ends in a final state.
struct Mdfa {
  int arity = 1;
  Alphabet sigma;
  std::vector<std::string> state_names;
  std::vector<int> tape_of;  // 0-based tape index per state
  int initial = 0;
  std::vector<bool> finals;
  std::vector<std::vector<int>> delta;  // delta[q][c], c in [0, |sigma|)
  std::vector<int> delta_end;           // endmarker column
  int num_states() const { return static_cast<int>(state_names.size()); }
  int step(int q, Sym c) const {
    return c == kEnd ? delta_end[static_cast<size_t>(q)]
                     : delta[static_cast<size_t>(q)][static_cast<size_t>(c)];
  }
};

// Complete DFA over a plain alphabet.
struct Dfa {
  Alphabet sigma;
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<bool> finals;                 // may be all-false (component DFA)
  std::vector<std::vector<int>> delta;
  int num_states() const { return static_cast<int>(state_names.size()); }
};

// Tuple of component DFAs accepting via a set of final state tuples.
struct IndependentKTape {
  int arity = 1;
  Alphabet sigma;
  std::vector<Dfa> components;
  std::set<std::vector<int>> final_tuples;
};

// Nondeterministic Buechi automaton over a tuple alphabet Sigma^width.
struct Nba {
  int width = 1;
  Alphabet sigma;
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<bool> accepting;
  struct Trans {
    int src;
    TupleLetter letter;  // width symbols, no padding
    int dst;
  };
  std::vector<Trans> transitions;
  int num_states() const { return static_cast<int>(state_names.size()); }
};

// Deterministic parity automaton over a tuple alphabet; acceptance: the
// minimal priority visited infinitely often is even. Letters are indexed in
// mixed radix (component i contributes sigma^i).
struct Dpa {
  int width = 1;
  Alphabet sigma;
  std::vector<std::string> state_names;
  int initial = 0;
  std::vector<int> priority;
  std::vector<std::vector<int>> delta;  // delta[q][letter_index]
  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_letters() const;
  int letter_index(const TupleLetter& l) const;
  TupleLetter letter_of_index(int idx) const;
};

// --- validation -----------------------------------------------------------

std::vector<std::string> validate(const KTapeAutomaton& a);
std::vector<std::string> validate(const Mdfa& a);
std::vector<std::string> validate(const Dfa& a);
std::vector<std::string> validate(const IndependentKTape& a);
std::vector<std::string> validate(const Nba& a);
std::vector<std::string> validate(const Dpa& a);
// Throws InputError listing all violations if any.
template <class A>
void require_valid(const A& a, const std::string& what) {
  auto v = validate(a);
  if (!v.empty()) {
    std::string msg = what + ": invalid automaton:";
    for (const auto& s : v) msg += "\n  " + s;
    throw InputError(msg);
  }
}

// --- graph utilities ---------------------------------------------------------

// Strongly connected components (Tarjan); components are numbered in reverse
// topological order.
struct SccInfo {
  std::vector<int> comp;  // component id per node
  int count = 0;
};
SccInfo strongly_connected(const std::vector<std::vector<int>>& succ);

// --- basic operations ------------------------------------------------------

// Removes states unreachable from the initial state.
KTapeAutomaton trim(const KTapeAutomaton& a);
// Additionally removes states from which no accepting cycle is reachable.
Nba trim(const Nba& a);
// Restriction of an Mdfa to its reachable part (stays total).
Mdfa reachable_part(const Mdfa& a);

bool member_det(const Mdfa& a, const WordTuple& u);
bool member_nondet(const KTapeAutomaton& a, const WordTuple& u);
bool member_independent(const IndependentKTape& i, const WordTuple& u);
bool member_dfa(const Dfa& d, const Word& w);

// Tape permutation: tape i of the result is tape perm[i] of the input.
Mdfa permute_tapes(const Mdfa& a, const std::vector<int>& perm);
KTapeAutomaton permute_tapes(const KTapeAutomaton& a, const std::vector<int>& perm);
WordTuple permute_tuple(const WordTuple& u, const std::vector<int>& perm);

// Nondeterministic view of a deterministic machine: unit-letter transitions
// plus guessed epsilon moves for the endmarker columns. Recognizes the same
// relation (over plain, unmarked tuples).
KTapeAutomaton as_nondet(const Mdfa& a);

// --- plain (exact-consumption) view ----------------------------------------

// Deterministic multitape machine whose relation is read without implicit
// endmarkers: u is accepted from q iff the unique run consuming exactly u
// ends in a final state. Obtained from an Mdfa by turning the endmarker into
// an ordinary last letter `emark` of the extended alphabet.
struct PlainDet {
  int arity = 1;
  Alphabet gamma;  // extended alphabet; last letter is the end mark
  Sym emark = 0;
  std::vector<std::string> state_names;
  std::vector<int> tape_of;
  int initial = 0;
  std::vector<bool> finals;
  std::vector<std::vector<int>> delta;  // total over gamma
  int dead = 0;                         // absorbing rejecting state
  int num_states() const { return static_cast<int>(state_names.size()); }
};

// Plain view of an Mdfa: relation { (u1 e, ..., uk e) : u in R(a) } over
// sigma + {e}. States track which tapes have passed their end letter so no
// junk tuple is accepted.
PlainDet make_plain(const Mdfa& a);

bool member_plain_from(const PlainDet& p, int q, const WordTuple& u);

// Wraps the plain relation from `root` back into end-marked user semantics:
// member_det(endmark_wrap(p, root), u) == member_plain_from(p, root, u).
Mdfa endmark_wrap(const PlainDet& p, int root);

// --- generic deterministic construction -------------------------------------

// On-the-fly construction of an Mdfa from a state encoding. Keys are integer
// vectors; `step` returns the successor key or nullopt for the rejecting
// sink. `owner` gives the tape a key consumes from. The endmarker is passed
// to `step` as kEnd.
struct DetBuild {
  int arity = 1;
  Alphabet sigma;
  std::function<int(const std::vector<int>&)> owner;
  std::function<std::optional<std::vector<int>>(const std::vector<int>&, Sym)> step;
  std::function<bool(const std::vector<int>&)> is_final;
};
Mdfa build_det(const DetBuild& b, const std::vector<int>& init, long long state_cap);

}  // namespace relkit

#endif  // RELKIT_AUTOMATA_HPP
