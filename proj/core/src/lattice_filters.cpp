#include <algorithm>
#include <map>

#include "ik/lattice.hpp"

namespace ik {

namespace {

constexpr std::size_t kAntichainLimit = 12;
constexpr std::size_t kStepLimit = 200'000;

bool antichain(const FinLattice& L, const std::vector<LElem>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (L.leq(xs[i], xs[j]) || L.leq(xs[j], xs[i])) return false;
  return true;
}

std::string describe(const FinLattice& L, const std::vector<LElem>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + L.name(xs[i]);
  return s + "}";
}

}  // namespace

std::vector<std::vector<LElem>> decompositions(const FinLattice& L, const DesignatedJoins& S,
                                               LElem x) {
  std::vector<std::vector<LElem>> out;
  const std::size_t n = L.size();
  if (n <= kAntichainLimit) {
    std::vector<std::vector<LElem>> found;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) < 2) continue;
      std::vector<LElem> xs;
      for (LElem e = 0; e < n; ++e)
        if (mask >> e & 1) xs.push_back(e);
      if (L.join(xs) == x && antichain(L, xs)) found.push_back(std::move(xs));
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    out = std::move(found);
  } else {
    for (LElem a = 0; a < n; ++a)
      for (LElem b = a + 1; b < n; ++b)
        if (L.join(a, b) == x && !L.leq(a, b) && !L.leq(b, a)) out.push_back({a, b});
  }
  for (const auto& j : S.joins)
    if (j.target == x) out.push_back(j.family);
  return out;
}

std::size_t schedule_index(std::size_t beta, std::size_t gamma) {
  return beta < gamma ? gamma * gamma + beta : beta * beta + beta + gamma;
}

std::pair<std::size_t, std::size_t> schedule_pair(std::size_t index) {
  std::size_t k = 0;
  while ((k + 1) * (k + 1) <= index) ++k;
  std::size_t r = index - k * k;
  if (r < k) return {r, k};
  return {k, r - k};
}

ConstructResult construct_filter(const FinLattice& L, const DesignatedJoins& S, LElem a, LElem b) {
  if (L.leq(a, b))
    throw LatticeError("construct_filter: " + L.name(a) + " <= " + L.name(b));
  std::map<LElem, std::vector<std::vector<LElem>>> cache;
  auto decomp = [&](LElem x) -> const std::vector<std::vector<LElem>>& {
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, decompositions(L, S, x)).first;
    return it->second;
  };
  // up(m) is prime once every decomposition of every x >= m meets up(m).
  auto stable = [&](LElem m) {
    for (LElem x = 0; x < L.size(); ++x) {
      if (!L.leq(m, x)) continue;
      for (const auto& d : decomp(x))
        if (std::none_of(d.begin(), d.end(), [&](LElem e) { return L.leq(m, e); })) return false;
    }
    return true;
  };

  BranchTrace trace;
  trace.values.push_back(a);
  LElem n = a;
  for (std::size_t step = 0;; ++step) {
    if (stable(n)) break;
    if (step >= kStepLimit) throw LatticeError("construct_filter: step limit exceeded");
    // Dense set gamma is the decompositions of the gamma-th element; it acts
    // once that element has entered the filter generated so far.
    auto [beta, gamma] = schedule_pair(step);
    LElem x = static_cast<LElem>(gamma % L.size());
    const auto& ds = decomp(x);
    LElem next = n;
    if (!ds.empty() && L.leq(n, x)) {
      const auto& d = ds[beta % ds.size()];
      auto it = std::find_if(d.begin(), d.end(), [&](LElem e) { return !L.leq(L.meet(n, e), b); });
      if (it == d.end())
        throw LatticeError("not distributive at step " + std::to_string(step) + ": every " +
                           L.name(n) + " meet " + describe(L, d) + " lies below " + L.name(b));
      next = L.meet(n, *it);
    }
    trace.values.push_back(next);
    n = next;
    trace.steps = step + 1;
  }
  trace.stable = n;
  return ConstructResult{Filter{L.up(n)}, std::move(trace)};
}

Filter extend_filter(const FinLattice& L, const DesignatedJoins& S, const ElemSet& filter,
                     const ElemSet& ideal) {
  if (!is_filter(L, filter)) throw LatticeError("extend_filter: not a filter");
  if (!is_ideal(L, ideal)) throw LatticeError("extend_filter: not an ideal");
  if (filter.intersects(ideal)) throw LatticeError("extend_filter: filter meets the ideal");
  std::vector<LElem> fs, is;
  for (LElem e = 0; e < L.size(); ++e) {
    if (filter[e]) fs.push_back(e);
    if (ideal[e]) is.push_back(e);
  }
  try {
    auto r = construct_filter(L, S, L.meet(fs), L.join(is));
    if (is_prime_filter(L, S, r.filter.members)) return r.filter;
  } catch (const LatticeError&) {
  }
  for (auto& p : prime_filters(L, S))
    if (filter.is_subset_of(p.members) && !p.members.intersects(ideal)) return p;
  throw LatticeError("no prime filter contains " + print_set(L, filter) + " and misses " +
                     print_set(L, ideal));
}

// ---------------------------------------------------------------- duality

namespace {

LElem generator(const FinLattice& L, const ElemSet& f) {
  std::vector<LElem> xs;
  for (auto i = f.find_first(); i != ElemSet::npos; i = f.find_next(i)) xs.push_back(i);
  return L.meet(xs);
}

std::string set_name(const Poset& p, const ElemSet& s, const char* tag) {
  std::string out = tag;
  for (auto i = s.find_first(); i != ElemSet::npos; i = s.find_next(i)) out += "_" + p.names[i];
  return out;
}

FinLattice closed_sets(const Poset& p, bool upward) {
  const std::size_t n = p.size();
  if (n > 20) throw LatticeError("poset too large for its lattice of up-sets");
  std::vector<ElemSet> sets;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    ElemSet s(n, mask);
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (s[i])
        for (std::size_t j = 0; j < n; ++j)
          if ((upward ? p.leq[i][j] : p.leq[j][i]) && !s[j]) {
            closed = false;
            break;
          }
    if (closed) sets.push_back(s);
  }
  std::vector<std::string> names;
  std::vector<std::vector<bool>> rel(sets.size(), std::vector<bool>(sets.size()));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    names.push_back(set_name(p, sets[i], upward ? "U" : "D"));
    for (std::size_t j = 0; j < sets.size(); ++j) rel[i][j] = sets[i].is_subset_of(sets[j]);
  }
  return FinLattice::from_poset(Poset::from_relation(names, rel));
}

// Members of each element of closed_sets(p, true), indexed like that lattice.
std::vector<ElemSet> upset_members(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<ElemSet> sets;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    ElemSet s(n, mask);
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (s[i])
        for (std::size_t j = 0; j < n; ++j)
          if (p.leq[i][j] && !s[j]) {
            closed = false;
            break;
          }
    if (closed) sets.push_back(s);
  }
  return sets;
}

}  // namespace

FinLattice upsets_lattice(const Poset& p) { return closed_sets(p, true); }
FinLattice downsets_lattice(const Poset& p) { return closed_sets(p, false); }

SpectralPoset spectrum(const FinLattice& L, const DesignatedJoins& S) {
  SpectralPoset sp;
  sp.points = prime_filters(L, S);
  const std::size_t n = sp.points.size();
  std::vector<std::string> names;
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("^" + L.name(generator(L, sp.points[i].members)));
    for (std::size_t j = 0; j < n; ++j)
      rel[i][j] = sp.points[i].members.is_subset_of(sp.points[j].members);
  }
  sp.order = Poset::from_relation(names, rel);
  // Distinct elements must be told apart by some point.
  for (LElem a = 0; a < L.size() && sp.separation_ok; ++a)
    for (LElem b = 0; b < L.size(); ++b) {
      if (a == b) continue;
      bool split = std::any_of(sp.points.begin(), sp.points.end(),
                               [&](const Filter& f) { return f.members[a] != f.members[b]; });
      if (!split) {
        sp.separation_ok = false;
        sp.separation_witness = "no prime filter separates " + L.name(a) + " and " + L.name(b);
        break;
      }
    }
  return sp;
}

DualityReport poset_roundtrip(const Poset& p) {
  DualityReport r;
  auto U = upsets_lattice(p);
  auto members = upset_members(p);
  auto sp = spectrum(U);
  std::map<ElemSet, std::size_t> index;
  for (std::size_t i = 0; i < sp.points.size(); ++i) index[sp.points[i].members] = i;
  for (std::size_t x = 0; x < p.size(); ++x) {
    ElemSet f(U.size());
    for (LElem u = 0; u < U.size(); ++u) f[u] = members[u][x];
    auto it = index.find(f);
    if (it == index.end()) {
      r.witness = "upsets containing " + p.names[x] + " do not form a prime filter";
      return r;
    }
    r.point_map.push_back(it->second);
  }
  std::vector<bool> hit(sp.points.size());
  for (auto i : r.point_map) hit[i] = true;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (!hit[i]) {
      r.witness = "prime filter " + sp.order.names[i] + " is not the image of a point";
      return r;
    }
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = 0; y < p.size(); ++y)
      if (p.leq[x][y] != sp.order.leq[r.point_map[x]][r.point_map[y]]) {
        r.witness = "order differs at " + p.names[x] + ", " + p.names[y];
        return r;
      }
  r.ok = true;
  return r;
}

DualityReport duality_roundtrip(const FinLattice& L, const DesignatedJoins& S) {
  DualityReport r;
  if (auto t = distributivity_witness(L)) {
    r.witness = "not distributive: " + L.name(t->a) + " meet (" + L.name(t->b) + " join " +
                L.name(t->c) + ")";
    return r;
  }
  auto sp = spectrum(L, S);
  auto U = upsets_lattice(sp.order);
  auto members = upset_members(sp.order);
  std::map<ElemSet, std::size_t> index;
  for (std::size_t u = 0; u < members.size(); ++u) index[members[u]] = u;

  std::vector<bool> hit(U.size());
  for (LElem a = 0; a < L.size(); ++a) {
    ElemSet phi(sp.points.size());
    std::vector<LElem> gens;
    for (std::size_t i = 0; i < sp.points.size(); ++i)
      if (sp.points[i].members[a]) {
        phi[i] = true;
        gens.push_back(generator(L, sp.points[i].members));
      }
    auto it = index.find(phi);
    if (it == index.end()) {
      r.witness = "phi(" + L.name(a) + ") is not an up-set";
      return r;
    }
    if (hit[it->second]) {
      r.witness = "phi is not injective at " + L.name(a);
      return r;
    }
    hit[it->second] = true;
    r.element_map.push_back(it->second);
    if (L.join(gens) != a) {
      r.witness = "join of the generators of phi(" + L.name(a) + ") is " + L.name(L.join(gens));
      return r;
    }
  }
  for (std::size_t u = 0; u < hit.size(); ++u)
    if (!hit[u]) {
      r.witness = "up-set " + U.name(u) + " is not phi of any element";
      return r;
    }
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b)
      if (L.leq(a, b) != U.leq(r.element_map[a], r.element_map[b])) {
        r.witness = "phi does not preserve the order at " + L.name(a) + ", " + L.name(b);
        return r;
      }
  auto back = poset_roundtrip(sp.order);
  if (!back.ok) {
    r.witness = "spectrum round trip: " + back.witness;
    return r;
  }
  r.point_map = std::move(back.point_map);
  r.ok = true;
  return r;
}

// ---------------------------------------------------------------- representation

std::optional<Designated> nondistributive_designation(const FinLattice& L,
                                                      const DesignatedJoins& S) {
  for (const auto& j : S.joins) {
    if (L.join(j.family) != j.target) return j;
    for (LElem a = 0; a < L.size(); ++a) {
      std::vector<LElem> ms;
      for (auto x : j.family) ms.push_back(L.meet(a, x));
      if (L.meet(a, j.target) != L.join(ms)) return j;
    }
  }
  for (const auto& m : S.meets) {
    if (L.meet(m.family) != m.target) return m;
    for (LElem a = 0; a < L.size(); ++a) {
      std::vector<LElem> js;
      for (auto x : m.family) js.push_back(L.join(a, x));
      if (L.join(a, m.target) != L.meet(js)) return m;
    }
  }
  return std::nullopt;
}

RsResult rs_filter(const FinLattice& L, const DesignatedJoins& S, LElem a, LElem b) {
  if (L.leq(a, b)) throw LatticeError("rs_filter: " + L.name(a) + " <= " + L.name(b));
  if (auto d = nondistributive_designation(L, S))
    throw LatticeError("designated family " + describe(L, d->family) + " at " + L.name(d->target) +
                       " is not distributive");
  RsResult r;
  // Every filter of a finite lattice preserves all meets, so the meet
  // hypothesis only needs one proper filter.
  r.hypothesis_vacuous = true;
  auto primes = prime_filters(L, S);
  // Try smaller filters first: they are the most likely to omit b.
  std::stable_sort(primes.begin(), primes.end(), [](const Filter& x, const Filter& y) {
    return x.members.count() < y.members.count();
  });
  std::string reasons;
  for (const auto& p : primes) {
    ++r.candidates;
    bool has_a = p.members[a], has_b = p.members[b];
    if (has_a && !has_b) {
      r.filter = p;
      return r;
    }
    reasons += "\n  ^" + L.name(generator(L, p.members)) +
               (has_a ? " contains " + L.name(b) : " omits " + L.name(a));
  }
  r.certificate = "examined " + std::to_string(primes.size()) + " prime filters" + reasons;
  return r;
}

bool baire_check(const FinLattice& L, const DesignatedJoins& S) {
  auto primes = prime_filters(L, S);
  const std::size_t n = primes.size();
  if (n > 16) throw LatticeError("baire_check: spectrum too large");
  std::vector<std::uint32_t> basis;
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b) {
      std::uint32_t s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (primes[i].members[a] && !primes[i].members[b]) s |= 1u << i;
      basis.push_back(s);
    }
  auto open = [&](std::uint32_t o) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(o >> i & 1)) continue;
      bool covered = std::any_of(basis.begin(), basis.end(), [&](std::uint32_t b) {
        return (b >> i & 1) && (b & ~o) == 0;
      });
      if (!covered) return false;
    }
    return true;
  };
  auto dense = [&](std::uint32_t o) {
    return std::all_of(basis.begin(), basis.end(), [&](std::uint32_t b) { return !b || (b & o); });
  };
  std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1, meet = all;
  for (std::uint32_t o = 0; o <= all; ++o)
    if (open(o) && dense(o)) meet &= o;
  return dense(meet);
}

}  // namespace ik
