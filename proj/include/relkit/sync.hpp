// sync.hpp -- deciding whether a deterministic multitape relation is
// synchronous (has a regular convolution language): per-state tape
// partitions from cycle imbalance analysis, block-summarized automata with
// queue-based synchronization, the layered decision procedure, the
// reduction from recognizability to synchronicity, and assembly of the
// convolution DFA on success.
#ifndef RELKIT_SYNC_HPP
#define RELKIT_SYNC_HPP

#include <map>
#include <optional>

#include "relkit/drat.hpp"
#include "relkit/equiv.hpp"

namespace relkit {

// Per-state partition of the tape indices {0,...,k-1}: tapes i and j fall
// into different blocks of at[q] iff some pumpable cycle that consumes
// unequal amounts from tapes i and j, and from which a final state is
// reachable, can reach q. Cycles from which no final state is reachable
// never fire on accepted inputs and impose no constraint.
struct StatePartitionMap {
  std::vector<Partition> at;  // indexed by state
};
StatePartitionMap compute_partitions(const Mdfa& a);

// Alphabet of k-track convolution letters over sigma: all k-tuples over
// sigma plus the pad, except the all-pad tuple. Width-1 letters reuse the
// base letter names; wider tuples join component names with ':' and print
// the pad as '-'. Summarized machines read such letters, one width per
// block size of their partition, grouped by ascending width.
Alphabet block_alphabet(const Alphabet& sigma, int k);
// Letter index of a track tuple (components over sigma, kPad for padding)
// in an alphabet built for exactly that width.
Sym block_letter(const Alphabet& blocks, const Alphabet& sigma, const TupleLetter& t);
// Convolution of the projection of u to the given tape set, as a word over
// the block alphabet.
Word block_word(const Alphabet& blocks, const Alphabet& sigma, const WordTuple& u,
                const std::vector<int>& tapes);

// Deterministic machine for the block-summarized relation from one state:
// tape i of `m` carries the convolution of the source tapes in block i of
// `part`. Queues of length at most `queue_bound` (the state count of the
// source automaton) absorb the bounded read-ahead inside the summarized
// region; on leaving it to a state with a strictly finer partition, the
// supplied independent automaton of that state takes over.
struct SummarizedAutomaton {
  Mdfa m;              // arity = number of blocks, over block_alphabet
  int source = 0;      // state of the source automaton
  Partition part;      // partition whose blocks are the tapes of m
  long long queue_bound = 0;
};

// Budgets for the synchronicity decision. decide_recognizable budgets apply
// per summarized machine; certificate budgets bound the witness hunt for
// the non-synchronicity evidence.
struct SyncOptions {
  long long state_cap = 2'000'000;  // summarized machine construction
  long long indep_class_cap = 512;  // component classes per tape
  RecOptions rec;                   // per-state recognizability budgets
  int cert_rep_len_cap = 8;         // class representative length
  long long cert_rep_scan_cap = 20'000;  // words scanned for representatives
};

// Summarized machine for R_q under the partition at q. `independents` must
// contain an independent automaton (over block_alphabet(a.sigma, a.arity))
// for every reachable state whose partition is strictly finer than the one
// at q; a missing entry raises InputError when it is first needed.
SummarizedAutomaton summarize(const Mdfa& a, int q,
                              const std::map<int, IndependentKTape>& independents,
                              const SyncOptions& opt = {});

// Evidence that the convolution language of R(a) is not regular: three
// convolution prefixes x1,x2,x3 that are pairwise Myhill-Nerode
// inequivalent, each pair separated by the suffix y[i][j]. The prefixes
// embed a pumped run u to the failing state followed by the class
// representatives s[i] on tape `tape`; z[i][j] is the separating context,
// so that x_i y_{i,j} and x_j y_{i,j} convolve the full tuples whose
// memberships differ. Emitted for binary relations.
struct NonSyncEvidence {
  int tape = 0;                         // tape carrying the representatives
  WordTuple u;                          // run words from the initial state
  std::vector<Word> s;                  // 3 pairwise inequivalent words
  std::vector<std::vector<Word>> z;     // separating contexts, z[i][j], i<j
  std::vector<ConvWord> x;              // the 3 prefixes
  std::vector<std::vector<ConvWord>> y; // suffixes, y[i][j], i<j
};

struct SyncResult {
  bool synchronous = true;
  int state = -1;                          // failing state when not synchronous
  std::optional<RecResult> failure;        // verdict on its summarized machine
  std::optional<NonSyncEvidence> evidence; // 3-class certificate (arity 2)
  std::vector<std::vector<int>> layers;    // states per partition size 1..k
};

// Layered decision: processes states by descending partition size, testing
// recognizability of each summarized relation and materializing its
// independent form for the coarser layers; any failing state proves the
// relation not synchronous. Throws BudgetError (annotated with the state
// and stage) when a step exceeds its budget.
SyncResult decide_synchronous(const Mdfa& a, const SyncOptions& opt = {});

// Reduction from recognizability to synchronicity: machine for
// { (h^n1 t w1, ..., h^nk t wk) : n_i >= 0, w in R(a) } with fresh letters
// h and t. The result is recognizable iff R(a) is, and it is synchronous
// iff R(a) is recognizable. Determinism is preserved.
Mdfa rec_to_sync(const Mdfa& a);
KTapeAutomaton rec_to_sync(const KTapeAutomaton& a);

// On success, a complete DFA over the size-k block letters accepting
// exactly the convolutions of R(a); otherwise the failing SyncResult.
struct SyncAutomatonResult {
  SyncResult sync;
  std::optional<Dfa> dfa;
};
SyncAutomatonResult synchronous_automaton(const Mdfa& a, const SyncOptions& opt = {});

}  // namespace relkit

#endif  // RELKIT_SYNC_HPP
