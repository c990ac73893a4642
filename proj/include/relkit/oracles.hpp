// oracles.hpp -- brute-force reference semantics: tuple enumeration, relation
// enumeration, the complete bounded-length equivalence check, congruence
// index probing, and lasso evaluation for omega-automata.
#ifndef RELKIT_ORACLES_HPP
#define RELKIT_ORACLES_HPP

#include <functional>
#include <optional>

#include "relkit/automata.hpp"

namespace relkit {

// All word tuples u with total length ||u|| <= bound, emitted exhaustively
// and duplicate-free in length-lexicographic order (total length first, then
// lexicographic per component left to right).
std::vector<WordTuple> enumerate_tuples(int k, const Alphabet& sigma, long long bound);
// Streaming variant; stops early when the visitor returns false.
void for_each_tuple(int k, const Alphabet& sigma, long long bound,
                    const std::function<bool(const WordTuple&)>& visit);

std::vector<WordTuple> enumerate_relation(const Mdfa& a, long long bound);
std::vector<WordTuple> enumerate_relation(const KTapeAutomaton& a, long long bound);
std::vector<WordTuple> enumerate_relation(const IndependentKTape& a, long long bound);

// Equivalence of two deterministic multitape automata. Complete: if no bound
// is supplied, all tuples of total length <= n-1 are covered (n = total
// number of states of both machines), which decides equality exactly. The
// search is a synchronized two-run configuration search, not a tuple
// enumeration, so positive verdicts do not pay the exponential tuple count.
// A returned counterexample has minimal total length (ties broken
// deterministically by generation order).
struct EquivResult {
  bool equal = false;
  bool complete = false;    // bound covered n-1, so the verdict is exact
  long long bound = 0;      // total-length bound actually used
  std::optional<WordTuple> counterexample;
};
EquivResult bounded_equiv(const Mdfa& a, const Mdfa& b,
                          std::optional<long long> bound = std::nullopt,
                          long long config_cap = 20'000'000);

// Lower bound on the index of the j-th tape congruence: number of distinct
// rows of the membership matrix (words x, |x| <= bound) x (context tuples z,
// ||z|| <= bound), entry = member(x inserted at tape j of z). j is 0-based.
long long index_probe(const std::function<bool(const WordTuple&)>& member, int k,
                      const Alphabet& sigma, int j, long long bound);
long long index_probe(const Mdfa& a, int j, long long bound);
long long index_probe(const KTapeAutomaton& a, int j, long long bound);

// Acceptance of a tuple of ultimately periodic words. Components are
// normalized internally to a common prefix length and common period length
// by unrolling.
bool member_upword(const Nba& b, const std::vector<UpWord>& w);
bool member_upword(const Dpa& d, const std::vector<UpWord>& w);

// Normalization helper shared with the omega modules: all prefixes to the
// same length, all periods to their lcm.
std::vector<UpWord> normalize_upwords(const std::vector<UpWord>& w);

}  // namespace relkit

#endif  // RELKIT_ORACLES_HPP
