// catalog.hpp -- the named example machines used throughout the test suites
// and the CLI, plus seeded random instance generators.
#ifndef RELKIT_CATALOG_HPP
#define RELKIT_CATALOG_HPP

#include <cstdint>
#include <string>

#include "relkit/io.hpp"

namespace relkit {

// Pairs (x,y) over {a,b} with |x|+|y| >= 2.
Mdfa catalog_len2();
// Pairs (x,x) over {a,b}, read alternately letter by letter.
Mdfa catalog_eq();
// Pairs (x,y) over {a,b} where x is a scattered subsequence of y (greedy matcher).
Mdfa catalog_subseq();
// Pairs (x,y) over {a,b} where x is an infix of y (nondeterministic guess).
KTapeAutomaton catalog_infix();
// Pairs (u,v) over {0,1}: u,v are valid w-bit block codings of symbols in
// [0,n), |v| <= 2n blocks, and v is a scattered subword of u blockwise.
// O(n^2 log n) states. n >= 1.
Mdfa catalog_simon(int n);

// omega relations over {a,b}, width 2.
Dpa catalog_eq_omega();      // equal omega-words (parity: mismatch is fatal)
Nba catalog_neq_omega();     // some mismatch
Nba catalog_ee_omega();      // words agree from some point on
Nba catalog_not_ee_omega();  // infinitely many mismatches

// Lookup by name: LEN2, EQ, SUBSEQ, INFIX, SIMON(n), EQ_OMEGA, NEQ_OMEGA,
// EE_OMEGA, NOT_EE_OMEGA. Throws InputError on unknown names.
AnyAutomaton catalog_named(const std::string& name);

// Seeded random instances; deterministic for a fixed seed (no reliance on
// library distribution internals). Automata are total and trimmed.
Mdfa random_mdfa(int k, int states, int alphabet_size, std::uint64_t seed);
Nba random_nba(int width, int states, int alphabet_size, std::uint64_t seed);

}  // namespace relkit

#endif  // RELKIT_CATALOG_HPP
