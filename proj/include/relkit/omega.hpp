#pragma once

#include <cstdint>

#include "relkit/automata.hpp"

namespace relkit {

// Same transition structure with every priority incremented; recognizes the
// complement language.
Dpa complement_dpa(const Dpa& d);

// Standard parity-to-Buchi translation: alongside the plain states, pairs
// (state, even priority p) guess a point after which no priority below p
// occurs while p itself recurs.
Nba dpa_to_nba(const Dpa& d);

// Rank-based complementation (level rankings with an obligation set). Ranks
// range over 0..2n; rank_cap must be at least 2n. Throws BudgetError when the
// subset construction would exceed state_cap states.
Nba complement_nba(const Nba& b, int rank_cap, long long state_cap = 500'000);

// Buchi intersection via the usual alternating 0/1 flag.
Nba product_nba(const Nba& b1, const Nba& b2);

// True iff no ultimately periodic word (equivalently, no word at all) is
// accepted: no accepting state lies on a reachable cycle.
bool is_empty_nba(const Nba& b);

// Quotient by the coarsest forward bisimulation respecting acceptance;
// recognizes the same language with (usually far) fewer states.
Nba quotient_nba(const Nba& b);

}  // namespace relkit
