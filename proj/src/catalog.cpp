#include "relkit/catalog.hpp"

#include <random>

namespace relkit {

namespace {

Alphabet ab_alphabet() {
  Alphabet s;
  s.add("a");
  s.add("b");
  return s;
}

Alphabet bit_alphabet() {
  Alphabet s;
  s.add("0");
  s.add("1");
  return s;
}

}  // namespace

Mdfa catalog_len2() {
  Mdfa m;
  m.arity = 2;
  m.sigma = ab_alphabet();
  // c_i count on tape 1, d_i continue on tape 2, f_i after both ends.
  m.state_names = {"c0", "c1", "c2", "d0", "d1", "d2", "f0", "f1", "f2", "dead"};
  m.tape_of = {0, 0, 0, 1, 1, 1, 0, 0, 0, 0};
  m.initial = 0;
  m.finals = {false, false, false, false, false, false, false, false, true, false};
  auto row = [](int x) { return std::vector<int>{x, x}; };
  m.delta = {row(1), row(2), row(2), row(4), row(5), row(5),
             row(9), row(9), row(9), row(9)};
  m.delta_end = {3, 4, 5, 6, 7, 8, 9, 9, 9, 9};
  return m;
}

Mdfa catalog_eq() {
  Mdfa m;
  m.arity = 2;
  m.sigma = ab_alphabet();
  m.state_names = {"A", "Ba", "Bb", "E1", "F", "dead"};
  m.tape_of = {0, 1, 1, 1, 0, 0};
  m.initial = 0;
  m.finals = {false, false, false, false, true, false};
  m.delta = {{1, 2}, {0, 5}, {5, 0}, {5, 5}, {5, 5}, {5, 5}};
  m.delta_end = {3, 5, 5, 4, 5, 5};
  return m;
}

Mdfa catalog_subseq() {
  Mdfa m;
  m.arity = 2;
  m.sigma = ab_alphabet();
  // M reads the next letter of x; W_c scans y for it; D drains y after x ends.
  m.state_names = {"M", "Wa", "Wb", "D", "ACC", "dead"};
  m.tape_of = {0, 1, 1, 1, 0, 0};
  m.initial = 0;
  m.finals = {false, false, false, false, true, false};
  m.delta = {{1, 2}, {0, 1}, {2, 0}, {3, 3}, {5, 5}, {5, 5}};
  m.delta_end = {3, 5, 5, 4, 5, 5};
  return m;
}

KTapeAutomaton catalog_infix() {
  KTapeAutomaton a;
  a.arity = 2;
  a.sigma = ab_alphabet();
  a.state_names = {"S", "M", "T"};
  a.initial = 0;
  a.finals = {false, false, true};
  const Word e;
  a.transitions = {
      {0, {e, {0}}, 0}, {0, {e, {1}}, 0}, {0, {e, e}, 1},
      {1, {{0}, {0}}, 1}, {1, {{1}, {1}}, 1}, {1, {e, e}, 2},
      {2, {e, {0}}, 2}, {2, {e, {1}}, 2},
  };
  return a;
}

Mdfa catalog_simon(int n) {
  if (n < 1) throw InputError("catalog_simon: n must be >= 1");
  int w = 1;
  while ((1 << w) < n) ++w;
  // Bits of n-1, most significant first, used to check block values < n with
  // a constant-size comparison state instead of tracking the value.
  std::vector<int> limit(static_cast<size_t>(w));
  for (int i = 0; i < w; ++i) limit[static_cast<size_t>(i)] = ((n - 1) >> (w - 1 - i)) & 1;
  auto code_bit = [&](int c, int i) { return (c >> (w - 1 - i)) & 1; };

  // Key layout by phase (key[0]):
  //  0: reading a v block:  {0, j, len, val}
  //  1: scanning u for c:   {1, j, c, pos, eq, cmp}   cmp: 0 lt, 1 eq, 2 gt
  //  2: draining u:         {2, pos, cmp}
  //  3: accept              {3}
  DetBuild b;
  b.arity = 2;
  b.sigma = bit_alphabet();
  b.owner = [](const std::vector<int>& key) { return key[0] == 0 ? 1 : 0; };
  b.is_final = [](const std::vector<int>& key) { return key[0] == 3; };
  b.step = [=](const std::vector<int>& key, Sym s) -> std::optional<std::vector<int>> {
    auto cmp_step = [&](int cmp, int pos, int bit) {
      if (cmp != 1) return cmp;
      if (bit < limit[static_cast<size_t>(pos)]) return 0;
      if (bit > limit[static_cast<size_t>(pos)]) return 2;
      return 1;
    };
    switch (key[0]) {
      case 0: {  // v block
        int j = key[1], len = key[2], val = key[3];
        if (s == kEnd) {
          if (len != 0) return std::nullopt;  // end inside a block
          return std::vector<int>{2, 0, 1};   // drain u
        }
        if (j == 2 * n && len == 0) return std::nullopt;  // |v| > 2n blocks
        int nval = val * 2 + s;
        if (len + 1 == w) {
          if (nval >= n) return std::nullopt;  // invalid code
          return std::vector<int>{1, j, nval, 0, 1, 1};
        }
        return std::vector<int>{0, j, len + 1, nval};
      }
      case 1: {  // u block scan for c
        int j = key[1], c = key[2], pos = key[3], eq = key[4], cmp = key[5];
        if (s == kEnd) return std::nullopt;  // u exhausted with c unmatched
        int neq = eq && s == code_bit(c, pos) ? 1 : 0;
        int ncmp = cmp_step(cmp, pos, s);
        if (pos + 1 == w) {
          if (ncmp == 2) return std::nullopt;  // invalid u block
          if (neq) return std::vector<int>{0, j + 1, 0, 0};
          return std::vector<int>{1, j, c, 0, 1, 1};
        }
        return std::vector<int>{1, j, c, pos + 1, neq, ncmp};
      }
      case 2: {  // drain u, validating blocks
        int pos = key[1], cmp = key[2];
        if (s == kEnd) {
          if (pos != 0) return std::nullopt;
          return std::vector<int>{3};
        }
        int ncmp = cmp_step(cmp, pos, s);
        if (pos + 1 == w) {
          if (ncmp == 2) return std::nullopt;
          return std::vector<int>{2, 0, 1};
        }
        return std::vector<int>{2, pos + 1, ncmp};
      }
      default:
        return std::nullopt;  // accept state has no successors
    }
  };
  return build_det(b, {0, 0, 0, 0}, 1'000'000);
}

Dpa catalog_eq_omega() {
  Dpa d;
  d.width = 2;
  d.sigma = ab_alphabet();
  d.state_names = {"OK", "BAD"};
  d.initial = 0;
  d.priority = {0, 1};
  d.delta.assign(2, std::vector<int>(static_cast<size_t>(d.num_letters()), 1));
  for (int c = 0; c < d.sigma.size(); ++c)
    d.delta[0][static_cast<size_t>(d.letter_index({c, c}))] = 0;
  return d;
}

Nba catalog_neq_omega() {
  Nba b;
  b.width = 2;
  b.sigma = ab_alphabet();
  b.state_names = {"W", "T"};
  b.initial = 0;
  b.accepting = {false, true};
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) {
      b.transitions.push_back({0, {c, d}, c == d ? 0 : 1});
      b.transitions.push_back({1, {c, d}, 1});
    }
  return b;
}

Nba catalog_ee_omega() {
  Nba b;
  b.width = 2;
  b.sigma = ab_alphabet();
  b.state_names = {"P1", "P2"};
  b.initial = 0;
  b.accepting = {false, true};
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) b.transitions.push_back({0, {c, d}, 0});
  for (int c = 0; c < 2; ++c) {
    b.transitions.push_back({0, {c, c}, 1});
    b.transitions.push_back({1, {c, c}, 1});
  }
  return b;
}

Nba catalog_not_ee_omega() {
  Nba b;
  b.width = 2;
  b.sigma = ab_alphabet();
  b.state_names = {"S", "T"};
  b.initial = 0;
  b.accepting = {false, true};
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d) {
      b.transitions.push_back({0, {c, d}, c == d ? 0 : 1});
      b.transitions.push_back({1, {c, d}, c == d ? 0 : 1});
    }
  return b;
}

AnyAutomaton catalog_named(const std::string& name) {
  if (name == "LEN2") return catalog_len2();
  if (name == "EQ") return catalog_eq();
  if (name == "SUBSEQ") return catalog_subseq();
  if (name == "INFIX") return catalog_infix();
  if (name == "EQ_OMEGA") return catalog_eq_omega();
  if (name == "NEQ_OMEGA") return catalog_neq_omega();
  if (name == "EE_OMEGA") return catalog_ee_omega();
  if (name == "NOT_EE_OMEGA") return catalog_not_ee_omega();
  if (name.rfind("SIMON(", 0) == 0 && name.back() == ')') {
    try {
      return catalog_simon(std::stoi(name.substr(6, name.size() - 7)));
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw InputError("unknown catalog name: " + name);
}

namespace {

// Deterministic pseudo-random stream independent of library internals.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
  bool chance(int num, int den) { return below(den) < num; }
};

Alphabet sized_alphabet(int n) {
  Alphabet s;
  for (int i = 0; i < n; ++i) s.add(std::string(1, static_cast<char>('a' + i)));
  return s;
}

}  // namespace

Mdfa random_mdfa(int k, int states, int alphabet_size, std::uint64_t seed) {
  if (k < 1 || states < 1 || alphabet_size < 1)
    throw InputError("random_mdfa: bad parameters");
  Rng rng(seed);
  Mdfa m;
  m.arity = k;
  m.sigma = sized_alphabet(alphabet_size);
  for (int q = 0; q < states; ++q) {
    m.state_names.push_back("q" + std::to_string(q));
    m.tape_of.push_back(rng.below(k));
    m.finals.push_back(rng.chance(1, 3));
    std::vector<int> row;
    for (int c = 0; c < alphabet_size; ++c) row.push_back(rng.below(states));
    m.delta.push_back(std::move(row));
    m.delta_end.push_back(rng.below(states));
  }
  m.initial = 0;
  return reachable_part(m);
}

Nba random_nba(int width, int states, int alphabet_size, std::uint64_t seed) {
  if (width < 1 || states < 1 || alphabet_size < 1)
    throw InputError("random_nba: bad parameters");
  Rng rng(seed);
  Nba b;
  b.width = width;
  b.sigma = sized_alphabet(alphabet_size);
  for (int q = 0; q < states; ++q) {
    b.state_names.push_back("q" + std::to_string(q));
    b.accepting.push_back(rng.chance(1, 3));
  }
  b.initial = 0;
  int letters = 1;
  for (int i = 0; i < width; ++i) letters *= alphabet_size;
  for (int src = 0; src < states; ++src)
    for (int li = 0; li < letters; ++li) {
      TupleLetter l;
      int x = li;
      for (int i = 0; i < width; ++i) {
        l.push_back(x % alphabet_size);
        x /= alphabet_size;
      }
      for (int dst = 0; dst < states; ++dst)
        if (rng.chance(1, 3)) b.transitions.push_back({src, l, dst});
    }
  return b;
}

}  // namespace relkit
