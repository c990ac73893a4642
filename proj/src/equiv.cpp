#include "relkit/equiv.hpp"

#include <algorithm>
#include <cassert>

namespace relkit {

// --- partitions ---------------------------------------------------------------

Partition Partition::trivial(int k) {
  Partition p;
  p.k = k;
  p.blocks.emplace_back();
  for (int i = 0; i < k; ++i) p.blocks[0].push_back(i);
  return p;
}

Partition Partition::discrete(int k) {
  Partition p;
  p.k = k;
  for (int i = 0; i < k; ++i) p.blocks.push_back({i});
  return p;
}

void Partition::canonicalize() {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const std::vector<int>& x, const std::vector<int>& y) { return x[0] < y[0]; });
}

int Partition::block_of(int i) const {
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int x : blocks[b])
      if (x == i) return static_cast<int>(b);
  throw InputError("Partition::block_of: index not covered");
}

Partition coarsest_refinement(const Partition& p1, const Partition& p2) {
  if (p1.k != p2.k) throw InputError("coarsest_refinement: different k");
  Partition out;
  out.k = p1.k;
  for (const auto& b1 : p1.blocks)
    for (const auto& b2 : p2.blocks) {
      std::vector<int> inter;
      for (int x : b1)
        if (std::find(b2.begin(), b2.end(), x) != b2.end()) inter.push_back(x);
      if (!inter.empty()) out.blocks.push_back(std::move(inter));
    }
  out.canonicalize();
  return out;
}

Partition generated_partition(const std::vector<std::vector<int>>& sets, int k) {
  Partition acc = Partition::trivial(k);
  for (const auto& I : sets) {
    Partition p;
    p.k = k;
    std::vector<bool> in(static_cast<size_t>(k), false);
    for (int x : I) {
      if (x < 0 || x >= k) throw InputError("generated_partition: index out of range");
      in[static_cast<size_t>(x)] = true;
    }
    std::vector<int> inside, outside;
    for (int i = 0; i < k; ++i) (in[static_cast<size_t>(i)] ? inside : outside).push_back(i);
    if (!inside.empty()) p.blocks.push_back(inside);
    if (!outside.empty()) p.blocks.push_back(outside);
    p.canonicalize();
    acc = coarsest_refinement(acc, p);
  }
  return acc;
}

// --- residual automata ----------------------------------------------------------

namespace {

// Advances through forced tape-j moves consuming u then the endmarker.
// Position semantics: i < |u| next consumes u[i]; i == |u| next consumes the
// endmarker; i == |u|+1 everything consumed. A demand of tape j at i ==
// |u|+1 is where the original run halts: the chain ends in a terminal state
// marked i == |u|+2 that consumes nothing further (acceptance then only
// depends on the finals flag and on the other endmarkers having been read).
// Terminates because i strictly increases (asserted).
std::pair<int, int> compress_fixed(const Mdfa& a, int j, const Word& u, int q, int i) {
  int steps = 0;
  while (a.tape_of[static_cast<size_t>(q)] == j) {
    if (i < static_cast<int>(u.size())) {
      q = a.delta[static_cast<size_t>(q)][static_cast<size_t>(u[static_cast<size_t>(i)])];
    } else if (i == static_cast<int>(u.size())) {
      q = a.delta_end[static_cast<size_t>(q)];
    } else {
      return {q, static_cast<int>(u.size()) + 2};  // halted
    }
    ++i;
    ++steps;
    assert(steps <= static_cast<int>(u.size()) + 2);
  }
  (void)steps;
  return {q, i};
}

}  // namespace

Mdfa residual_fixed(const Mdfa& a, int j, const Word& u) {
  if (a.arity < 2) throw InputError("residual_fixed: needs arity >= 2");
  if (j < 0 || j >= a.arity) throw InputError("residual_fixed: tape out of range");
  int ulen = static_cast<int>(u.size());
  DetBuild b;
  b.arity = a.arity - 1;
  b.sigma = a.sigma;
  // Key {q, i}; i == |u|+2 marks the terminal "original run halted" state.
  b.owner = [&, j](const std::vector<int>& key) {
    if (key[1] > ulen + 1) return 0;
    int t = a.tape_of[static_cast<size_t>(key[0])];
    return t - (t > j ? 1 : 0);
  };
  b.is_final = [&, ulen](const std::vector<int>& key) {
    return key[1] >= ulen + 1 && a.finals[static_cast<size_t>(key[0])];
  };
  b.step = [&, j, ulen](const std::vector<int>& key, Sym c) -> std::optional<std::vector<int>> {
    if (key[1] > ulen + 1) return std::nullopt;  // halted: nothing more is read
    int q = a.step(key[0], c);
    auto [nq, ni] = compress_fixed(a, j, u, q, key[1]);
    return std::vector<int>{nq, ni};
  };
  auto [q0, i0] = compress_fixed(a, j, u, a.initial, 0);
  return build_det(b, {q0, i0}, 10'000'000);
}

Mdfa residual_prefix(const Mdfa& a, int j, const Word& u) {
  if (j < 0 || j >= a.arity) throw InputError("residual_prefix: tape out of range");
  int ulen = static_cast<int>(u.size());
  // Compression stops once u is exhausted: from then on tape j is live.
  auto compress = [&](int q, int i) {
    while (a.tape_of[static_cast<size_t>(q)] == j && i < ulen) {
      q = a.delta[static_cast<size_t>(q)][static_cast<size_t>(u[static_cast<size_t>(i)])];
      ++i;
    }
    return std::make_pair(q, i);
  };
  DetBuild b;
  b.arity = a.arity;
  b.sigma = a.sigma;
  b.owner = [&](const std::vector<int>& key) { return a.tape_of[static_cast<size_t>(key[0])]; };
  b.is_final = [&](const std::vector<int>& key) {
    return a.finals[static_cast<size_t>(key[0])];
  };
  b.step = [&](const std::vector<int>& key, Sym c) -> std::optional<std::vector<int>> {
    int q = a.step(key[0], c);
    auto [nq, ni] = compress(q, key[1]);
    return std::vector<int>{nq, ni};
  };
  auto [q0, i0] = compress(a.initial, 0);
  return build_det(b, {q0, i0}, 10'000'000);
}

bool approx_equiv(const Mdfa& a, int j, const Word& u, const Word& v) {
  return bounded_equiv(residual_fixed(a, j, u), residual_fixed(a, j, v)).equal;
}

bool right_congruence_equiv(const Mdfa& a, int j, const Word& u, const Word& v) {
  return bounded_equiv(residual_prefix(a, j, u), residual_prefix(a, j, v)).equal;
}

}  // namespace relkit
