// drat.hpp -- deciding whether a deterministic multitape relation is
// recognizable (a finite union of products of regular languages), with an
// explicit infinite-index witness when it is not; the reduction from
// automata equivalence to recognizability; and construction of the
// independent (component DFA) form together with its inverse plumbing.
#ifndef RELKIT_DRAT_HPP
#define RELKIT_DRAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "relkit/automata.hpp"

namespace relkit {

// Certificate that the tape-j congruence of the relation has infinite index.
// All states and letters refer to P = make_plain(drat_view(a, j)), i.e. the
// end-marked plain view with tape j moved to the front. The certified
// pattern is:
//   - q is reachable from the initial state of P,
//   - runs q ->(v1, v2)-> q, q ->(v1, x)-> r, r ->(v1, eps)-> r exist in P
//     (v1 on the front tape, the tuples on the remaining tapes), and
//   - exactly one of (w1, x.y) in R_q, (w1, y) in R_r holds,
// which pumps to infinitely many pairwise inequivalent front-tape classes.
struct NonRecWitness {
  int q = 0;
  int r = 0;
  Word v1, w1;          // front-tape words, v1 nonempty
  WordTuple v2, x, y;   // one word per remaining tape
};

struct RecResult {
  bool recognizable = true;
  int tape = -1;  // 0-based failing tape when not recognizable
  std::optional<NonRecWitness> witness;
};

// Budgets for decide_recognizable. The decision is sound but not complete:
// when neither a witness is found within the search budgets nor the
// right-congruence exploration closes within class_cap, a BudgetError is
// thrown instead of guessing.
struct RecOptions {
  long long class_cap = 512;              // right-congruence classes per tape
  long long class_len_cap = 24;           // representative length budget
  int encode_plain_cap = 24;              // plain-state gate for the encoding hunt
  long long encode_state_cap = 2'000'000; // per encoding machine
  long long equiv_bound = 10;             // counterexample hunt on the encodings
  long long equiv_config_cap = 2'000'000;
  long long search_sep_bound = 7;         // separating pair scan, total length
  long long search_tuple_cap = 400'000;   // scan width of the direct search
  long long sep_equiv_bound = 14;         // machine-level separation bound
  long long sep_equiv_config_cap = 500'000;
  int search_v1_cap = 6;                  // cycle words tried per state pair
  int search_x_cap = 12;                  // connecting tuples tried per cycle word
  int search_pair_cap = 10000;            // (q, r, v1, x) candidates per tape
};

// Copy of `a` with tape j moved to the front (tape order j, 0, .., j-1,
// j+1, .., k-1). The relation's components are permuted accordingly.
Mdfa drat_view(const Mdfa& a, int j);

// DFA over a.sigma accepting the nonempty words v such that the front-tape
// part of `a` treats v transparently: running v from any front-tape state s
// without touching the other tapes either leaves the front tape prematurely
// (undefined) or reaches a state t, and whenever t is again a front-tape
// state the same run from t comes back to t. DFA states are the partial
// maps s -> t reachable as such run summaries. Rejects the empty word.
Dfa null_transparent_dfa(const Mdfa& a, long long state_cap = 200'000);

// Binary (2-tape) witness-pattern encodings. Both machines read, over the
// plain alphabet of P = make_plain(a) extended with one letter per P-state
// plus separators `dia` and `mark`:
//   tape 0:  q^ r^ w1
//   tape 1:  g0 dia h0 (dia a_i g_i dia h_i)* mark y     (at least one a_i)
// and accept when q is reachable in P and the interleaved blocks spell out
// runs of P
//   pi:  q ->(a_1..a_n, g_0..g_n)-> q        (q's cycle)
//   rho: q ->(a_1..a_n, h_0..h_n)-> r        (the connecting run)
//   s3:  r ->(a_1..a_n, eps)-> r             (r's front-tape-only cycle)
// and additionally, with x = h_0..h_n:
//   c1 accepts iff (w1, x.y) in R_q;   c2 accepts iff (w1, y) in R_r.
// The two relations are equal iff no witness pattern exists.
struct ShuffleEncoding {
  Mdfa c1, c2;
  Alphabet letters;               // plain letters of P, then state letters, dia, mark
  std::vector<Sym> state_letter;  // per P-state
  Sym dia = 0, mark = 0;
};
ShuffleEncoding shuffle_encode(const Mdfa& a, long long state_cap = 2'000'000);

// k-ary witness-pattern encodings (k >= 2). Both machines read
//   tape 0:  q^ s_0 c_1 s_1 .. c_n s_n mark w1     (s_0 = s_n = q)
//   tape i:  w_i                                    (1 <= i < k)
// where q is reachable in P and s_0 c_1 s_1 .. is a transition-by-transition
// spelling of a P-run from q back to q whose front-tape letters form a
// null-transparent word v1 over the base alphabet.
//   p1 accepts iff (w1, w2..wk) in R_q;
//   p2 accepts iff (v1.w1, w2..wk) in R_q.
// The two relations are equal iff no witness pattern exists.
struct KaryEncoding {
  Mdfa p1, p2;
  Alphabet letters;
  std::vector<Sym> state_letter;
  Sym mark = 0;
};
KaryEncoding kary_encode(const Mdfa& a, long long state_cap = 2'000'000,
                         long long nt_cap = 200'000);

// Checks all conditions listed on NonRecWitness against a and tape j.
bool witness_valid(const Mdfa& a, int j, const NonRecWitness& w);

// Decides recognizability of R(a). For each tape j the procedure permutes j
// to the front and (1) hunts for a witness via the encodings above (small
// machines only) and via a direct pattern search over cycles of the plain
// view, validating any candidate before reporting it; (2) otherwise tries
// to close the tape-j right congruence by Nerode-style exploration, which
// proves the tape finite-index. Recognizable iff every tape closes. Throws
// BudgetError when a tape stays unresolved within the budgets.
RecResult decide_recognizable(const Mdfa& a, const RecOptions& opt = {});

// Reduction from equivalence to recognizability: builds a deterministic
// automaton T over a.sigma plus two fresh letters p (pump) and h (hash)
// such that R(T) is recognizable iff R(a) = R(b). T relates prefix pairs
// (p^i h, p^i h) to short members of R(a) and (p^i h, p^j h), i != j, to
// short members of R(b), where "short" means total length < |a| + |b|.
// Requires equal arity k >= 2 and equal alphabets.
Mdfa eq_to_rec(const Mdfa& a, const Mdfa& b);

// Result of build_independent: exactly one of the fields is set, unless the
// exploration overflowed and the fallback decision also ran out of budget
// (then BudgetError is thrown).
struct IndependentOutcome {
  std::optional<IndependentKTape> independent;
  std::optional<RecResult> evidence;  // proof that no independent form exists
};

// Computes an independent k-tape automaton for R(a) by exploring, per tape,
// the right congruence "u = v iff all right extensions stay tape-equivalent"
// with right_congruence_equiv: representatives become component DFA states.
// The accepting tuples are the representative combinations that a accepts.
// If any component exceeds class_cap states, decide_recognizable(a) is
// consulted: a witness becomes `evidence`, otherwise BudgetError.
IndependentOutcome build_independent(const Mdfa& a, long long class_cap = 512);

// Deterministic automaton with the same relation as an independent one:
// reads the tapes in order, running component t on tape t, and accepts when
// the reached state tuple is accepting.
Mdfa independent_to_det(const IndependentKTape& ind);

}  // namespace relkit

#endif  // RELKIT_DRAT_HPP
