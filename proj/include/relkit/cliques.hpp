#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relkit/automata.hpp"
#include "relkit/core.hpp"

namespace relkit {

// A "three cycles" pattern between states of an NBA over pairs: runs
//   q1 -(u,u)-> q2, q2 -(v,v)-> q2, q2 -(w,v)-> q3, q3 -(x,v)-> q3,
//   q3 -(x,w)-> q4, q4 -(x,x)-> q4, q4 -(y,y)-> q5
// with |v| = |w| = |x| > 0 and v != w. It certifies runs over all pairs
// (u v^i w x^{n-i} y, u v^j w x^{n-j} y) with i < j <= n.
struct ThreeCyclesWitness {
  int q1 = 0, q2 = 0, q3 = 0, q4 = 0, q5 = 0;
  Word u, v, w, x, y;
};

// Evidence that the relation of a pair-NBA contains arbitrarily large cliques
// (and hence an infinite one, for complements of equivalence relations).
//   prefix kind:   family  u v^i w x^{n-i} y z^w            (0 <= i <= n)
//   periodic kind: family  z t_0(i) ... t_{k-1}(i) (t_k(i) ... t_last(i))^w
// where t_m(i) = u_m v_m^i w_m x_m^{n-i} y_m comes from chain[m] and k is
// loop_start. The chain's state sequence closes a cycle whose final link
// visits an accepting state.
struct CliqueCertificate {
  enum class Kind { kPrefix, kPeriodic };
  Kind kind = Kind::kPrefix;
  Word u, v, w, x, y, z;                  // prefix kind (z also used as the
                                          // periodic kind's leading stem)
  std::vector<ThreeCyclesWitness> chain;  // periodic kind
  int loop_start = 0;                     // index into chain where the period
                                          // begins (periodic kind)
};

struct ThreeCyclesRel {
  std::vector<std::vector<bool>> rel;   // pattern exists
  std::vector<std::vector<bool>> relF;  // pattern with an accepting visit on
                                        // one of the four non-loop runs
};

// Computes both pattern relations of an NBA over pairs (width 2).
ThreeCyclesRel three_cycles(const Nba& a, long long node_cap = 20'000'000);

// Reconstructs explicit pattern words for one pair, if the pattern exists.
std::optional<ThreeCyclesWitness> three_cycles_witness(
    const Nba& a, int q1, int q5, bool need_final,
    long long node_cap = 20'000'000);

// Pattern from the initial state followed by a diagonal accepting run on
// (z,z)^w; yields cliques whose words differ only in a finite prefix.
std::optional<CliqueCertificate> detect_prefix_pattern(
    const Nba& a, long long node_cap = 20'000'000);

// Diagonal stem into a chain q1 => ... => q_last of patterns that closes a
// cycle whose last link is final; yields cliques differing in the period.
std::optional<CliqueCertificate> detect_periodic_pattern(
    const Nba& a, long long node_cap = 20'000'000);

// For the complement of an equivalence relation: some certificate exists iff
// the relation has an infinite clique. Tries the prefix pattern first.
std::optional<CliqueCertificate> has_infinite_clique(
    const Nba& a, long long node_cap = 20'000'000);

// Samples word pairs/triples and reports a description of the first observed
// violation of "the complement of L(a) is an equivalence relation", if any.
// Purely a sanity aid; never part of the decision procedure.
std::optional<std::string> check_co_equivalence_sample(const Nba& a,
                                                       std::uint64_t seed,
                                                       int samples);

// NBA over pairs (x,y) for "x and y are not interchangeable on tape j of r":
// some tuple z on the remaining tapes separates them. Built as a union of
// two accept/reject products sharing the guessed z, then trimmed.
Nba co_equiv_nba(const Dpa& r, int j);
Nba co_equiv_nba(const Nba& r, int j, int rank_cap,
                 long long state_cap = 500'000);

// Materializes the n+1 ultimately periodic words of a certificate's family.
std::vector<UpWord> expand_clique(const CliqueCertificate& c, int n);

struct OmegaRecResult {
  bool recognizable = true;
  int tape = -1;  // separating tape when not recognizable
  std::optional<CliqueCertificate> certificate;
};

// A relation of omega-words given by a parity or Buchi automaton is a finite
// union of products iff no tape admits unbounded non-interchangeability
// cliques; checks every tape j in [0, k-2].
OmegaRecResult decide_omega_recognizable(const Dpa& r);
OmegaRecResult decide_omega_recognizable(const Nba& r, int rank_cap,
                                         long long state_cap = 500'000);

}  // namespace relkit
