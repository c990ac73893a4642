#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "relkit/catalog.hpp"
#include "relkit/oracles.hpp"

using namespace relkit;

namespace {

Alphabet ab() {
  Alphabet s;
  s.add("a");
  s.add("b");
  return s;
}

Word w(const Alphabet& s, const std::string& chars) {
  Word out;
  for (char c : chars) out.push_back(s.at(std::string(1, c)));
  return out;
}

bool is_subseq(const Word& x, const Word& y) {
  size_t i = 0;
  for (Sym c : y)
    if (i < x.size() && x[i] == c) ++i;
  return i == x.size();
}

}  // namespace

TEST_CASE("tuple enumeration is exhaustive, duplicate-free, length ordered") {
  std::vector<WordTuple> all = enumerate_tuples(2, ab(), 3);
  CHECK(all.size() == 49);  // sum over n<=3 of (n+1)*2^n
  std::set<WordTuple> dedup(all.begin(), all.end());
  CHECK(dedup.size() == all.size());
  for (size_t i = 1; i < all.size(); ++i)
    CHECK(tuple_len(all[i - 1]) <= tuple_len(all[i]));
}

TEST_CASE("catalog membership matches the defining predicates") {
  Alphabet s = ab();
  Mdfa len2 = catalog_len2();
  Mdfa eq = catalog_eq();
  Mdfa subseq = catalog_subseq();
  KTapeAutomaton infix = catalog_infix();
  CHECK(validate(len2).empty());
  CHECK(validate(eq).empty());
  CHECK(validate(subseq).empty());
  CHECK(validate(infix).empty());

  CHECK(member_det(subseq, {w(s, "ab"), w(s, "aabb")}));
  CHECK_FALSE(member_det(subseq, {w(s, "ba"), w(s, "ab")}));
  CHECK(member_nondet(infix, {w(s, "ab"), w(s, "aabb")}));
  CHECK_FALSE(member_nondet(infix, {w(s, "aa"), w(s, "abab")}));

  for (const WordTuple& u : enumerate_tuples(2, s, 5)) {
    CHECK(member_det(len2, u) == (tuple_len(u) >= 2));
    CHECK(member_det(eq, u) == (u[0] == u[1]));
    CHECK(member_det(subseq, u) == is_subseq(u[0], u[1]));
    bool inf = false;
    for (size_t i = 0; i + u[0].size() <= u[1].size(); ++i)
      if (std::equal(u[0].begin(), u[0].end(), u[1].begin() + static_cast<long>(i))) inf = true;
    CHECK(member_nondet(infix, u) == inf);
  }
}

TEST_CASE("relation enumeration filters the tuple stream") {
  std::vector<WordTuple> rel = enumerate_relation(catalog_len2(), 2);
  CHECK(rel.size() == 12);  // exactly the tuples of total length 2
  for (const WordTuple& u : rel) CHECK(tuple_len(u) == 2);
  Mdfa none = catalog_eq();
  for (size_t q = 0; q < none.finals.size(); ++q) none.finals[q] = false;
  CHECK(enumerate_relation(none, 4).empty());
}

TEST_CASE("bounded_equiv: reflexivity and a flipped final bit") {
  Mdfa a = catalog_len2();
  EquivResult same = bounded_equiv(a, a);
  CHECK(same.equal);
  CHECK(same.complete);

  Mdfa b = catalog_len2();
  b.finals[6] = true;  // f0: accept the empty tuple too
  EquivResult diff = bounded_equiv(a, b);
  CHECK_FALSE(diff.equal);
  REQUIRE(diff.counterexample.has_value());
  CHECK(tuple_len(*diff.counterexample) == 0);
  CHECK(member_det(a, *diff.counterexample) != member_det(b, *diff.counterexample));
}

TEST_CASE("bounded_equiv agrees with naive enumeration on random pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int k = seed % 2 == 0 ? 2 : 3;
    Mdfa a = random_mdfa(k, 3, 2, seed);
    Mdfa b = random_mdfa(k, 3, 2, seed + 1000);
    long long L = a.num_states() + b.num_states() - 1;
    std::optional<WordTuple> naive;
    for_each_tuple(k, a.sigma, L, [&](const WordTuple& u) {
      if (member_det(a, u) != member_det(b, u)) {
        naive = u;
        return false;
      }
      return true;
    });
    EquivResult r = bounded_equiv(a, b);
    CHECK(r.equal == !naive.has_value());
    if (naive && r.counterexample) {
      CHECK(tuple_len(*r.counterexample) == tuple_len(*naive));
      CHECK(member_det(a, *r.counterexample) != member_det(b, *r.counterexample));
    }
  }
}

TEST_CASE("bounded_equiv: isomorphic relabeling is equal") {
  Mdfa a = random_mdfa(2, 4, 2, 7);
  Mdfa b = a;
  std::reverse(b.state_names.begin(), b.state_names.end());  // names are irrelevant
  CHECK(bounded_equiv(a, b).equal);
}

TEST_CASE("block-coded subsequence relation") {
  Alphabet bits;
  bits.add("0");
  bits.add("1");
  Mdfa s1 = catalog_simon(1);
  CHECK(validate(s1).empty());
  CHECK(member_det(s1, {w(bits, "000"), w(bits, "00")}));
  CHECK_FALSE(member_det(s1, {w(bits, "0"), w(bits, "00")}));
  CHECK_FALSE(member_det(s1, {w(bits, "010"), w(bits, "0")}));  // invalid code in u
  CHECK_FALSE(member_det(s1, {w(bits, "000"), w(bits, "000")}));  // |v| > 2n

  Mdfa s2 = catalog_simon(2);
  CHECK(validate(s2).empty());
  for (const WordTuple& u : enumerate_tuples(2, bits, 6)) {
    bool want = u[1].size() <= 4 && is_subseq(u[1], u[0]);
    CHECK(member_det(s2, u) == want);
  }

  for (int n = 1; n <= 6; ++n) {
    Mdfa m = catalog_simon(n);
    int wbits = 1;
    while ((1 << wbits) < n) ++wbits;
    CHECK(m.num_states() <= 40 * n * n * wbits);
  }
}

TEST_CASE("congruence index probing") {
  CHECK(index_probe(catalog_len2(), 0, 3) == 3);
  CHECK(index_probe(catalog_eq(), 0, 3) == 15);
  Mdfa none = catalog_eq();
  for (size_t q = 0; q < none.finals.size(); ++q) none.finals[q] = false;
  CHECK(index_probe(none, 0, 3) == 1);
}

TEST_CASE("lasso evaluation on the omega catalog") {
  Alphabet s = ab();
  Sym A = 0, B = 1;
  auto up = [](Word p, Word q) { return UpWord{std::move(p), std::move(q)}; };
  CHECK(member_upword(catalog_eq_omega(), {up({}, {A}), up({}, {A})}));
  CHECK(member_upword(catalog_eq_omega(), {up({A}, {B, A}), up({}, {A, B})}));
  CHECK_FALSE(member_upword(catalog_eq_omega(), {up({}, {A}), up({}, {B})}));

  CHECK(member_upword(catalog_neq_omega(), {up({A, B}, {A}), up({A, A}, {A})}));
  CHECK_FALSE(member_upword(catalog_neq_omega(), {up({}, {A, B}), up({A, B}, {A, B})}));

  CHECK(member_upword(catalog_ee_omega(), {up({B}, {A}), up({}, {A})}));
  CHECK_FALSE(member_upword(catalog_ee_omega(), {up({}, {A, A, B}), up({}, {A})}));

  CHECK_FALSE(member_upword(catalog_not_ee_omega(), {up({}, {A, B}), up({}, {A, B})}));
  CHECK(member_upword(catalog_not_ee_omega(), {up({}, {A, A, B}), up({}, {A})}));
  (void)s;
}
