#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ik/lattice.hpp"
#include "ik/random.hpp"

namespace ik {
namespace {

FinLattice lat(const std::string& text) { return parse_lattice_file(text).lattice; }

const char* kChain3 = "elements 0 m 1\nleq 0 m\nleq m 1\n";
const char* kSquare = "elements 0 a b 1\nleq 0 a\nleq 0 b\nleq a 1\nleq b 1\n";
const char* kM3 = "elements 0 x y z 1\nleq 0 x\nleq 0 y\nleq 0 z\nleq x 1\nleq y 1\nleq z 1\n";
const char* kN5 = "elements 0 a b c 1\nleq 0 a\nleq a b\nleq b 1\nleq 0 c\nleq c 1\n";

LElem at(const FinLattice& L, const std::string& name) { return *L.index(name); }

ElemSet set_of(const FinLattice& L, std::initializer_list<const char*> names) {
  ElemSet s(L.size());
  for (auto n : names) s[at(L, n)] = true;
  return s;
}

// ---------------------------------------------------------------- oracles

// Prime filters straight from the definition, by enumerating all subsets.
std::vector<ElemSet> prime_oracle(const FinLattice& L, const DesignatedJoins& S = {}) {
  const std::size_t n = L.size();
  std::vector<ElemSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    auto in = [&](LElem e) { return bool(mask >> e & 1); };
    bool ok = in(L.top()) && !in(L.bottom());
    for (LElem a = 0; a < n && ok; ++a)
      for (LElem b = 0; b < n && ok; ++b) {
        if (in(a) && L.leq(a, b) && !in(b)) ok = false;
        if (in(a) && in(b) && !in(L.meet(a, b))) ok = false;
        if (in(L.join(a, b)) && !in(a) && !in(b)) ok = false;
      }
    for (const auto& j : S.joins)
      if (ok && in(j.target) && std::none_of(j.family.begin(), j.family.end(), in)) ok = false;
    for (const auto& m : S.meets)
      if (ok && !in(m.target) && std::all_of(m.family.begin(), m.family.end(), in)) ok = false;
    if (ok) out.push_back(ElemSet(n, mask));
  }
  return out;
}

std::vector<ElemSet> sorted(std::vector<ElemSet> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<ElemSet> members(const std::vector<Filter>& fs) {
  std::vector<ElemSet> out;
  for (const auto& f : fs) out.push_back(f.members);
  return out;
}

// Isomorphism by trying every permutation.
bool isomorphic(const Poset& p, const Poset& q) {
  if (p.size() != q.size()) return false;
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i)
      for (std::size_t j = 0; j < p.size() && ok; ++j)
        ok = p.leq[i][j] == q.leq[perm[i]][perm[j]];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Tree distributivity at (gamma, d) = (2, 2) by enumerating all labellings of
// the 7-node tree and the five bars.
bool tree_dist_oracle(const FinLattice& L) {
  const std::size_t n = L.size();
  // nodes: 0 root, 1 = <0>, 2 = <1>, 3 = <0,0>, 4 = <0,1>, 5 = <1,0>, 6 = <1,1>
  const std::vector<std::vector<int>> bars{{0}, {1, 2}, {1, 5, 6}, {3, 4, 2}, {3, 4, 5, 6}};
  const int parent[7] = {-1, 0, 0, 1, 1, 2, 2};
  std::vector<LElem> a(7, 0);
  for (std::size_t code = 0;; ++code) {
    std::size_t c = code;
    for (auto& x : a) {
      x = c % n;
      c /= n;
    }
    if (c) break;
    if (!L.leq(a[0], L.join(a[1], a[2])) || !L.leq(a[1], L.join(a[3], a[4])) ||
        !L.leq(a[2], L.join(a[5], a[6])))
      continue;
    for (const auto& bar : bars) {
      LElem v = L.bottom();
      for (int f : bar) {
        LElem m = L.top();
        for (int g = f; g >= 0; g = parent[g]) m = L.meet(m, a[g]);
        v = L.join(v, m);
      }
      if (v != a[0]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- tests

TEST(Lattice, ParseAndOperations) {
  auto L = lat(kSquare);
  EXPECT_EQ(L.size(), 4u);
  EXPECT_EQ(L.join(at(L, "a"), at(L, "b")), at(L, "1"));
  EXPECT_EQ(L.meet(at(L, "a"), at(L, "b")), at(L, "0"));
  EXPECT_EQ(L.bottom(), at(L, "0"));
  EXPECT_EQ(L.top(), at(L, "1"));
  EXPECT_THROW(lat("elements a b\n"), LatticeError);
  EXPECT_THROW(lat("elements 0 a b c d 1\nleq 0 a\nleq 0 b\nleq a c\nleq a d\nleq b c\nleq b d\n"
                   "leq c 1\nleq d 1\n"),
               LatticeError);
  EXPECT_THROW(lat("elements a b\nleq a b\nleq b a\n"), LatticeError);
  EXPECT_THROW(lat("elements a\nleq a q\n"), SyntaxError);
  EXPECT_THROW(lat("leq a b\n"), SyntaxError);
}

TEST(Lattice, FileRoundTrip) {
  auto f = parse_lattice_file(std::string(kSquare) + "join 1 = a b\nmeet 0 = a b\n");
  ASSERT_EQ(f.designated.joins.size(), 1u);
  ASSERT_EQ(f.designated.meets.size(), 1u);
  auto text = write_lattice(f.lattice, f.designated);
  EXPECT_EQ(write_lattice(parse_lattice_file(text).lattice, parse_lattice_file(text).designated),
            text);
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& L : lattice_catalog(n))
      EXPECT_TRUE(isomorphic(parse_lattice_file(write_lattice(L)).lattice.order(), L.order()));
}

TEST(Distributive, Examples) {
  EXPECT_TRUE(is_distributive(lat(kChain3)));
  EXPECT_TRUE(is_distributive(lat(kSquare)));
  EXPECT_FALSE(is_distributive(lat(kM3)));
  EXPECT_FALSE(is_distributive(lat(kN5)));
  auto w = distributivity_witness(lat(kM3));
  ASSERT_TRUE(w.has_value());
}

TEST(PrimeFilters, Examples) {
  auto C = lat(kChain3);
  EXPECT_EQ(sorted(members(prime_filters(C))),
            sorted({set_of(C, {"m", "1"}), set_of(C, {"1"})}));
  auto B = lat(kSquare);
  EXPECT_EQ(sorted(members(prime_filters(B))),
            sorted({set_of(B, {"a", "1"}), set_of(B, {"b", "1"})}));
  EXPECT_TRUE(prime_filters(lat(kM3)).empty());
}

TEST(PrimeFilters, AgreeWithSubsetEnumeration) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& L : lattice_catalog(n))
      ASSERT_EQ(sorted(members(prime_filters(L))), sorted(prime_oracle(L)))
          << write_lattice(L);
}

TEST(PrimeFilters, DesignationsAgreeWithSubsetEnumeration) {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    auto cat = lattice_catalog(uniform(rng, 3, 7));
    const auto& L = cat[uniform(rng, 0, cat.size() - 1)];
    DesignatedJoins S;
    for (int k = 0; k < 2; ++k) {
      std::vector<LElem> fam{uniform(rng, 0, L.size() - 1), uniform(rng, 0, L.size() - 1)};
      S.joins.push_back({L.join(fam), fam});
      fam = {uniform(rng, 0, L.size() - 1), uniform(rng, 0, L.size() - 1)};
      S.meets.push_back({L.meet(fam), fam});
    }
    ASSERT_EQ(sorted(members(prime_filters(L, S))), sorted(prime_oracle(L, S)));
  }
}

TEST(TreeDistributive, Examples) {
  EXPECT_TRUE(is_tree_distributive(lat(kChain3), 2, 2).holds);
  auto r = is_tree_distributive(lat(kM3), 2, 1);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(r.witness->bar.empty());
  EXPECT_TRUE(is_tree_distributive(lat(kM3), 1, 3).holds);
  EXPECT_TRUE(is_tree_distributive(lat(kN5), 1, 2).holds);
  EXPECT_FALSE(is_tree_distributive(lat(kN5), 2, 2).holds);
}

TEST(TreeDistributive, WitnessIsGenuine) {
  for (std::size_t n = 5; n <= 7; ++n)
    for (const auto& L : lattice_catalog(n)) {
      auto r = is_tree_distributive(L, 2, 2);
      if (r.holds) continue;
      const auto& w = *r.witness;
      auto label = [&](const std::vector<std::size_t>& addr) {
        auto it = std::find(w.addresses.begin(), w.addresses.end(), addr);
        EXPECT_NE(it, w.addresses.end());
        return w.labels[it - w.addresses.begin()];
      };
      for (std::size_t i = 0; i < w.addresses.size(); ++i) {
        auto child = w.addresses[i];
        child.push_back(0);
        if (std::find(w.addresses.begin(), w.addresses.end(), child) == w.addresses.end()) continue;
        auto sibling = w.addresses[i];
        sibling.push_back(1);
        EXPECT_TRUE(L.leq(w.labels[i], L.join(label(child), label(sibling))));
      }
      LElem v = L.bottom();
      for (const auto& f : w.bar) {
        LElem m = L.top();
        for (std::size_t k = 0; k <= f.size(); ++k)
          m = L.meet(m, label(std::vector<std::size_t>(f.begin(), f.begin() + k)));
        v = L.join(v, m);
      }
      EXPECT_EQ(v, w.bar_join);
      EXPECT_NE(v, label({}));
    }
}

TEST(TreeDistributive, AgreesWithExhaustiveOracle) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& L : lattice_catalog(n))
      ASSERT_EQ(is_tree_distributive(L, 2, 2).holds, tree_dist_oracle(L)) << write_lattice(L);
}

TEST(Catalog, Counts) {
  const std::size_t lattices[] = {1, 1, 1, 2, 5, 15, 53, 222};
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(lattice_catalog(n).size(), lattices[n - 1]) << n;
  const std::size_t posets[] = {1, 1, 2, 5, 16, 63};
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(poset_catalog(n).size(), posets[n]) << n;
  const std::size_t dist[] = {1, 1, 1, 2, 3, 5, 8, 15, 26, 47};
  for (std::size_t n = 1; n <= 10; ++n)
    EXPECT_EQ(distributive_catalog(n).size(), dist[n - 1]) << n;
}

TEST(Catalog, EntriesAreDistinctLattices) {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto cat = lattice_catalog(n);
    for (std::size_t i = 0; i < cat.size(); ++i)
      for (std::size_t j = i + 1; j < cat.size(); ++j)
        EXPECT_FALSE(isomorphic(cat[i].order(), cat[j].order()));
  }
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& L : distributive_catalog(n)) EXPECT_TRUE(is_distributive(L));
}

TEST(Catalog, CanonicalFormDecidesIsomorphism) {
  Rng rng(22);
  auto posets = poset_catalog(5);
  for (int i = 0; i < 200; ++i) {
    const auto& p = posets[uniform(rng, 0, posets.size() - 1)];
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Poset q = p;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = 0; b < p.size(); ++b) q.leq[perm[a]][perm[b]] = p.leq[a][b];
    EXPECT_EQ(canonical_form(p), canonical_form(q));
  }
}

TEST(Schedule, PairingIsABijectionWithLevelBound) {
  for (std::size_t i = 0; i < 5000; ++i) {
    auto [beta, gamma] = schedule_pair(i);
    EXPECT_EQ(schedule_index(beta, gamma), i);
    EXPECT_GE(i, gamma);
  }
}

TEST(ConstructFilter, Examples) {
  auto C = lat(kChain3);
  auto r = construct_filter(C, {}, at(C, "m"), at(C, "0"));
  EXPECT_EQ(r.filter.members, set_of(C, {"m", "1"}));
  auto B = lat(kSquare);
  auto s = construct_filter(B, {}, at(B, "1"), at(B, "0"));
  EXPECT_TRUE(s.filter.members == set_of(B, {"a", "1"}) ||
              s.filter.members == set_of(B, {"b", "1"}));
  EXPECT_THROW(construct_filter(B, {}, at(B, "1"), at(B, "1")), LatticeError);
  auto M = lat(kM3);
  EXPECT_THROW(construct_filter(M, {}, at(M, "x"), at(M, "y")), LatticeError);
  // The failure is the missing refinement, found before the step limit.
  try {
    construct_filter(M, {}, at(M, "x"), at(M, "y"));
  } catch (const LatticeError& e) {
    EXPECT_NE(std::string(e.what()).find("not distributive"), std::string::npos) << e.what();
  }
}

TEST(ConstructFilter, SeparatesEveryPairInDistributiveLattices) {
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& L : lattice_catalog(n)) {
      if (!is_distributive(L)) continue;
      auto primes = sorted(prime_oracle(L));
      for (LElem a = 0; a < L.size(); ++a)
        for (LElem b = 0; b < L.size(); ++b) {
          if (L.leq(a, b)) continue;
          auto r = construct_filter(L, {}, a, b);
          ASSERT_TRUE(std::binary_search(primes.begin(), primes.end(), r.filter.members));
          EXPECT_TRUE(r.filter.members[a]);
          EXPECT_FALSE(r.filter.members[b]);
          for (std::size_t i = 1; i < r.trace.values.size(); ++i)
            EXPECT_TRUE(L.leq(r.trace.values[i], r.trace.values[i - 1]));
          EXPECT_EQ(r.trace.values.back(), r.trace.stable);
        }
    }
}

TEST(ConstructFilter, PreservesDesignatedJoins) {
  auto B = lat(kSquare);
  DesignatedJoins S;
  S.joins.push_back({at(B, "1"), {at(B, "a"), at(B, "b")}});
  auto r = construct_filter(B, S, at(B, "1"), at(B, "0"));
  EXPECT_TRUE(is_prime_filter(B, S, r.filter.members));
}

TEST(ExtendFilter, Examples) {
  auto C = lat(kChain3);
  auto f = extend_filter(C, {}, set_of(C, {"1"}), set_of(C, {"0"}));
  EXPECT_TRUE(f.members == set_of(C, {"1"}) || f.members == set_of(C, {"m", "1"}));
  auto B = lat(kSquare);
  auto g = extend_filter(B, {}, set_of(B, {"a", "1"}), set_of(B, {"0", "b"}));
  EXPECT_EQ(g.members, set_of(B, {"a", "1"}));
  EXPECT_THROW(extend_filter(B, {}, set_of(B, {"a", "1"}), set_of(B, {"0", "a"})), LatticeError);
  auto M = lat(kM3);
  EXPECT_THROW(extend_filter(M, {}, set_of(M, {"x", "1"}), set_of(M, {"0"})), LatticeError);
}

TEST(ExtendFilter, RandomFilterIdealPairs) {
  Rng rng(23);
  auto cat = distributive_catalog(8);
  for (int i = 0; i < 300; ++i) {
    const auto& L = cat[uniform(rng, 0, cat.size() - 1)];
    LElem a = uniform(rng, 0, L.size() - 1), b = uniform(rng, 0, L.size() - 1);
    if (L.leq(a, b)) continue;
    auto F = L.up(a), I = L.down(b);
    auto p = extend_filter(L, {}, F, I);
    EXPECT_TRUE(is_prime_filter(L, {}, p.members));
    EXPECT_TRUE(F.is_subset_of(p.members));
    EXPECT_FALSE(p.members.intersects(I));
  }
}

TEST(Spectrum, Examples) {
  auto c = spectrum(lat(kChain3));
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_TRUE(c.order.leq[0][1] || c.order.leq[1][0]);
  EXPECT_TRUE(c.separation_ok);
  auto b = spectrum(lat(kSquare));
  ASSERT_EQ(b.points.size(), 2u);
  EXPECT_FALSE(b.order.leq[0][1] || b.order.leq[1][0]);
  EXPECT_TRUE(spectrum(chain_lattice(1)).points.empty());
  EXPECT_FALSE(spectrum(lat(kM3)).separation_ok);
}

TEST(Spectrum, SeparationMatchesDistributivity) {
  for (std::size_t n = 2; n <= 8; ++n)
    for (const auto& L : lattice_catalog(n))
      EXPECT_EQ(spectrum(L).separation_ok, is_distributive(L)) << write_lattice(L);
}

TEST(Upsets, Examples) {
  auto one = poset_catalog(1)[0];
  EXPECT_EQ(upsets_lattice(one).size(), 2u);
  auto two = poset_catalog(2);
  for (const auto& p : two) {
    auto U = upsets_lattice(p);
    bool chain = p.leq[0][1] || p.leq[1][0];
    EXPECT_EQ(U.size(), chain ? 3u : 4u);
    EXPECT_TRUE(isomorphic(U.order(), (chain ? chain_lattice(3) : lat(kSquare)).order()));
  }
  EXPECT_EQ(downsets_lattice(two[0]).size(), upsets_lattice(two[0]).size());
}

TEST(Duality, Examples) {
  EXPECT_TRUE(duality_roundtrip(lat(kChain3)).ok);
  EXPECT_TRUE(duality_roundtrip(lat(kSquare)).ok);
  auto m = duality_roundtrip(lat(kM3));
  EXPECT_FALSE(m.ok);
  EXPECT_NE(m.witness.find("not distributive"), std::string::npos);
}

TEST(Duality, AllDistributiveLatticesAndPosets) {
  for (std::size_t n = 1; n <= 9; ++n)
    for (const auto& L : distributive_catalog(n)) {
      auto r = duality_roundtrip(L);
      ASSERT_TRUE(r.ok) << r.witness << "\n" << write_lattice(L);
      ASSERT_EQ(r.element_map.size(), L.size());
    }
  for (std::size_t n = 0; n <= 4; ++n)
    for (const auto& p : poset_catalog(n)) EXPECT_TRUE(poset_roundtrip(p).ok);
}

TEST(RsFilter, Examples) {
  auto B = lat(kSquare);
  DesignatedJoins S;
  S.joins.push_back({at(B, "1"), {at(B, "a"), at(B, "b")}});
  auto r = rs_filter(B, S, at(B, "1"), at(B, "0"));
  ASSERT_TRUE(r.filter.has_value());
  EXPECT_TRUE(r.filter->members == set_of(B, {"a", "1"}) ||
              r.filter->members == set_of(B, {"b", "1"}));

  auto C = lat(kChain3);
  DesignatedJoins T;
  T.meets.push_back({at(C, "m"), {at(C, "1"), at(C, "m")}});
  auto s = rs_filter(C, T, at(C, "m"), at(C, "0"));
  ASSERT_TRUE(s.filter.has_value());
  EXPECT_EQ(s.filter->members, set_of(C, {"m", "1"}));

  EXPECT_THROW(rs_filter(C, T, at(C, "0"), at(C, "m")), LatticeError);
  DesignatedJoins bad;
  auto N = lat(kN5);
  bad.joins.push_back({at(N, "1"), {at(N, "a"), at(N, "c")}});
  EXPECT_THROW(rs_filter(N, bad, at(N, "1"), at(N, "0")), LatticeError);

  auto M = lat(kM3);
  auto none = rs_filter(M, {}, at(M, "x"), at(M, "y"));
  EXPECT_FALSE(none.filter.has_value());
  EXPECT_NE(none.certificate.find("examined 0"), std::string::npos);
}

TEST(RsFilter, AgreesWithEnumerationOnRandomDesignations) {
  Rng rng(24);
  auto cat = distributive_catalog(8);
  for (int i = 0; i < 300; ++i) {
    const auto& L = cat[uniform(rng, 0, cat.size() - 1)];
    DesignatedJoins S;
    std::vector<LElem> fam{uniform(rng, 0, L.size() - 1), uniform(rng, 0, L.size() - 1)};
    S.joins.push_back({L.join(fam), fam});
    fam = {uniform(rng, 0, L.size() - 1), uniform(rng, 0, L.size() - 1)};
    S.meets.push_back({L.meet(fam), fam});
    LElem a = uniform(rng, 0, L.size() - 1), b = uniform(rng, 0, L.size() - 1);
    if (L.leq(a, b)) continue;
    auto r = rs_filter(L, S, a, b);
    bool exists = false;
    for (const auto& p : prime_oracle(L, S)) exists |= p[a] && !p[b];
    ASSERT_EQ(r.filter.has_value(), exists);
    if (r.filter) EXPECT_TRUE(is_prime_filter(L, S, r.filter->members));
  }
}

TEST(Baire, SmallLattices) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& L : lattice_catalog(n)) EXPECT_TRUE(baire_check(L));
}

}  // namespace
}  // namespace ik
