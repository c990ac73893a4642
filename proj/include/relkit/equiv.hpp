// equiv.hpp -- partitions of tape indices, residual automata, and exact
// decision of the fixed-word and prefix-word tape congruences.
#ifndef RELKIT_EQUIV_HPP
#define RELKIT_EQUIV_HPP

#include "relkit/automata.hpp"
#include "relkit/oracles.hpp"

namespace relkit {

// Partition of the tape indices {0,...,k-1}. Canonical form: blocks sorted by
// minimum element, elements ascending within each block.
struct Partition {
  int k = 0;
  std::vector<std::vector<int>> blocks;

  static Partition trivial(int k);   // single block
  static Partition discrete(int k);  // singletons
  void canonicalize();
  int block_of(int i) const;  // index of the block containing i
  bool operator==(const Partition& o) const { return k == o.k && blocks == o.blocks; }
  bool operator!=(const Partition& o) const { return !(*this == o); }
};

// Coarsest common refinement (meet): all nonempty pairwise block intersections.
Partition coarsest_refinement(const Partition& p1, const Partition& p2);
// Iterated meet of {I, complement of I} over the given index sets.
Partition generated_partition(const std::vector<std::vector<int>>& sets, int k);

// Deterministic (k-1)-tape automaton for { z : u inserted at tape j of z is
// in R(a) }. Moves of tape-j states are forced (they consume u then the
// endmarker) and are compressed away; exhausting u while still demanding
// tape j leads to the rejecting sink.
Mdfa residual_fixed(const Mdfa& a, int j, const Word& u);

// Deterministic k-tape automaton for { w : (w with u prepended on tape j) is
// in R(a) }. Same compression, but after u is exhausted tape j reads live
// input again.
Mdfa residual_prefix(const Mdfa& a, int j, const Word& u);

// Exact decisions of the tape congruences via residual equivalence.
bool approx_equiv(const Mdfa& a, int j, const Word& u, const Word& v);           // u ~j v
bool right_congruence_equiv(const Mdfa& a, int j, const Word& u, const Word& v);  // u =j v

}  // namespace relkit

#endif  // RELKIT_EQUIV_HPP
