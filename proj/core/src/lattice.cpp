#include "ik/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace ik {

// ---------------------------------------------------------------- posets

Poset Poset::from_relation(std::vector<std::string> names, std::vector<std::vector<bool>> rel) {
  const std::size_t n = names.size();
  if (rel.size() != n) throw LatticeError("order relation has the wrong size");
  for (auto& row : rel)
    if (row.size() != n) throw LatticeError("order relation has the wrong size");
  for (std::size_t i = 0; i < n; ++i) rel[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (rel[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (rel[k][j]) rel[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rel[i][j] && rel[j][i])
        throw LatticeError("order is not antisymmetric: " + names[i] + " and " + names[j]);
  return Poset{std::move(names), std::move(rel)};
}

std::string canonical_form(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<std::pair<std::size_t, std::size_t>> key(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      key[i].first += p.leq[j][i];
      key[i].second += p.leq[i][j];
    }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  // Groups of equal key; only permutations inside groups are tried.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && key[order[j]] == key[order[i]]) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  std::string prefix;
  for (auto i : order) prefix += std::to_string(key[i].first) + "." + std::to_string(key[i].second) + ";";

  std::string best;
  auto encode = [&] {
    std::string s(n * n, '0');
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (p.leq[order[i]][order[j]]) s[i * n + j] = '1';
    if (best.empty() || s < best) best = s;
  };
  for (auto& g : groups) std::sort(order.begin() + g.first, order.begin() + g.second);
  // Odometer over the per-group permutations.
  for (;;) {
    encode();
    std::size_t gi = 0;
    for (; gi < groups.size(); ++gi) {
      auto [b, e] = groups[gi];
      if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
    }
    if (gi == groups.size()) break;
  }
  return prefix + best;
}

// ---------------------------------------------------------------- lattices

FinLattice FinLattice::from_poset(const Poset& p) {
  const std::size_t n = p.size();
  if (n == 0) throw LatticeError("a lattice needs at least one element");
  FinLattice L;
  L.order_ = p;
  L.meet_.assign(n, std::vector<LElem>(n));
  L.join_.assign(n, std::vector<LElem>(n));
  auto bound = [&](LElem a, LElem b, bool upper) -> LElem {
    std::optional<LElem> best;
    for (LElem c = 0; c < n; ++c) {
      bool is_bound = upper ? (p.leq[a][c] && p.leq[b][c]) : (p.leq[c][a] && p.leq[c][b]);
      if (!is_bound) continue;
      if (!best || (upper ? p.leq[c][*best] : p.leq[*best][c])) best = c;
    }
    if (!best) throw LatticeError("no " + std::string(upper ? "upper" : "lower") + " bound of " +
                                  p.names[a] + " and " + p.names[b]);
    for (LElem c = 0; c < n; ++c) {
      bool is_bound = upper ? (p.leq[a][c] && p.leq[b][c]) : (p.leq[c][a] && p.leq[c][b]);
      if (is_bound && !(upper ? p.leq[*best][c] : p.leq[c][*best]))
        throw LatticeError(std::string(upper ? "join" : "meet") + " of " + p.names[a] + " and " +
                           p.names[b] + " does not exist");
    }
    return *best;
  };
  for (LElem a = 0; a < n; ++a)
    for (LElem b = a; b < n; ++b) {
      L.join_[a][b] = L.join_[b][a] = bound(a, b, true);
      L.meet_[a][b] = L.meet_[b][a] = bound(a, b, false);
    }
  L.bottom_ = 0;
  L.top_ = 0;
  for (LElem a = 1; a < n; ++a) {
    L.bottom_ = L.meet_[L.bottom_][a];
    L.top_ = L.join_[L.top_][a];
  }
  return L;
}

LElem FinLattice::meet(const std::vector<LElem>& xs) const {
  LElem m = top_;
  for (auto x : xs) m = meet_[m][x];
  return m;
}

LElem FinLattice::join(const std::vector<LElem>& xs) const {
  LElem m = bottom_;
  for (auto x : xs) m = join_[m][x];
  return m;
}

std::optional<LElem> FinLattice::index(std::string_view name) const {
  for (LElem a = 0; a < size(); ++a)
    if (order_.names[a] == name) return a;
  return std::nullopt;
}

ElemSet FinLattice::up(LElem a) const {
  ElemSet s(size());
  for (LElem b = 0; b < size(); ++b) s[b] = leq(a, b);
  return s;
}

ElemSet FinLattice::down(LElem a) const {
  ElemSet s(size());
  for (LElem b = 0; b < size(); ++b) s[b] = leq(b, a);
  return s;
}

FinLattice chain_lattice(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (std::size_t j = i; j < n; ++j) rel[i][j] = true;
  }
  return FinLattice::from_poset(Poset::from_relation(names, rel));
}

std::string print_set(const FinLattice& L, const ElemSet& s) {
  std::string out = "{";
  bool first = true;
  for (auto i = s.find_first(); i != ElemSet::npos; i = s.find_next(i)) {
    if (!first) out += ", ";
    first = false;
    out += L.name(i);
  }
  return out + "}";
}

// ---------------------------------------------------------------- filters

bool is_filter(const FinLattice& L, const ElemSet& s) {
  if (s.size() != L.size() || !s[L.top()]) return false;
  for (LElem a = 0; a < L.size(); ++a) {
    if (!s[a]) continue;
    for (LElem b = 0; b < L.size(); ++b) {
      if (L.leq(a, b) && !s[b]) return false;
      if (s[b] && !s[L.meet(a, b)]) return false;
    }
  }
  return true;
}

bool is_ideal(const FinLattice& L, const ElemSet& s) {
  if (s.size() != L.size() || !s[L.bottom()]) return false;
  for (LElem a = 0; a < L.size(); ++a) {
    if (!s[a]) continue;
    for (LElem b = 0; b < L.size(); ++b) {
      if (L.leq(b, a) && !s[b]) return false;
      if (s[b] && !s[L.join(a, b)]) return false;
    }
  }
  return true;
}

bool is_prime_filter(const FinLattice& L, const DesignatedJoins& S, const ElemSet& s) {
  if (!is_filter(L, s) || s[L.bottom()]) return false;
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = a + 1; b < L.size(); ++b)
      if (!s[a] && !s[b] && s[L.join(a, b)]) return false;
  for (const auto& j : S.joins)
    if (s[j.target] &&
        std::none_of(j.family.begin(), j.family.end(), [&](LElem x) { return s[x]; }))
      return false;
  for (const auto& m : S.meets)
    if (!s[m.target] &&
        std::all_of(m.family.begin(), m.family.end(), [&](LElem x) { return s[x]; }))
      return false;
  return true;
}

std::vector<Filter> prime_filters(const FinLattice& L, const DesignatedJoins& S) {
  // Finite filters are principal, so it suffices to test up(m) for each m.
  std::vector<Filter> out;
  for (LElem m = 0; m < L.size(); ++m) {
    if (m == L.bottom()) continue;
    auto f = L.up(m);
    bool prime = true;
    for (LElem a = 0; a < L.size() && prime; ++a) {
      if (f[a]) continue;
      for (LElem b = a + 1; b < L.size(); ++b)
        if (!f[b] && f[L.join(a, b)]) {
          prime = false;
          break;
        }
    }
    if (prime && is_prime_filter(L, S, f)) out.push_back(Filter{f});
  }
  return out;
}

std::optional<Triple> distributivity_witness(const FinLattice& L) {
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b)
      for (LElem c = 0; c < L.size(); ++c)
        if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))) return Triple{a, b, c};
  return std::nullopt;
}

bool is_distributive(const FinLattice& L) { return !distributivity_witness(L); }

// ---------------------------------------------------------------- tree distributivity

namespace {

class TreeDist {
public:
  TreeDist(const FinLattice& L, std::size_t gamma, std::size_t budget)
      : L_(L), gamma_(gamma), budget_(budget) {
    if (L.size() > 64) throw LatticeError("tree distributivity: lattice larger than 64 elements");
  }

  // Achievable values of the bar join below a node labelled x whose path
  // meet (root to node, inclusive) is p, with r levels remaining.
  std::uint64_t values(LElem x, LElem p, std::size_t r) {
    auto key = std::make_tuple(x, p, r);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint64_t out = bit(p);
    if (r > 0)
      each_children(x, [&](const std::vector<LElem>& c) {
        out |= combine(c, p, r);
        return false;
      });
    memo_[key] = out;
    return out;
  }

  // Rebuilds a labelling below (x, p, r) whose bar join equals target.
  void rebuild(LElem x, LElem p, std::size_t r, LElem target, std::vector<std::size_t>& addr,
               TreeWitness& w) {
    if (target == p) {
      w.bar.push_back(addr);
      return;
    }
    each_children(x, [&](const std::vector<LElem>& c) {
      std::vector<LElem> pick(c.size());
      if (!reach(c, p, r, 0, L_.bottom(), target, pick)) return false;
      for (std::size_t i = 0; i < c.size(); ++i) {
        addr.push_back(i);
        w.addresses.push_back(addr);
        w.labels.push_back(c[i]);
        rebuild(c[i], L_.meet(p, c[i]), r - 1, pick[i], addr, w);
        addr.pop_back();
      }
      return true;
    });
  }

private:
  static std::uint64_t bit(LElem e) { return std::uint64_t{1} << e; }

  void spend(std::size_t n) {
    if (used_ += n; used_ > budget_)
      throw LatticeError("tree distributivity: resource bound exceeded");
  }

  // Calls f on every child labelling c with x <= join(c); stops when f returns true.
  template <class F>
  void each_children(LElem x, F f) {
    std::vector<LElem> c(gamma_, 0);
    for (;;) {
      spend(1);
      if (L_.leq(x, L_.join(c)) && f(c)) return;
      std::size_t i = 0;
      while (i < gamma_ && ++c[i] == L_.size()) c[i++] = 0;
      if (i == gamma_) return;
    }
  }

  std::uint64_t combine(const std::vector<LElem>& c, LElem p, std::size_t r) {
    std::uint64_t acc = bit(L_.bottom());
    for (auto ci : c) {
      auto vs = values(ci, L_.meet(p, ci), r - 1);
      std::uint64_t next = 0;
      for (LElem u = 0; u < L_.size(); ++u) {
        if (!(acc >> u & 1)) continue;
        for (LElem v = 0; v < L_.size(); ++v)
          if (vs >> v & 1) next |= bit(L_.join(u, v));
      }
      spend(L_.size());
      acc = next;
    }
    return acc;
  }

  bool reach(const std::vector<LElem>& c, LElem p, std::size_t r, std::size_t i, LElem acc,
             LElem target, std::vector<LElem>& pick) {
    if (i == c.size()) return acc == target;
    auto vs = values(c[i], L_.meet(p, c[i]), r - 1);
    for (LElem v = 0; v < L_.size(); ++v) {
      if (!(vs >> v & 1)) continue;
      pick[i] = v;
      if (reach(c, p, r, i + 1, L_.join(acc, v), target, pick)) return true;
    }
    return false;
  }

  const FinLattice& L_;
  std::size_t gamma_;
  std::size_t budget_;
  std::size_t used_ = 0;
  std::map<std::tuple<LElem, LElem, std::size_t>, std::uint64_t> memo_;
};

}  // namespace

TreeDistResult is_tree_distributive(const FinLattice& L, std::size_t gamma, std::size_t d,
                                    std::size_t budget) {
  if (gamma == 0 || d == 0) return {};
  TreeDist td(L, gamma, budget);
  for (LElem x = 0; x < L.size(); ++x) {
    auto vs = td.values(x, x, d);
    for (LElem v = 0; v < L.size(); ++v) {
      if (!(vs >> v & 1) || v == x) continue;
      TreeWitness w;
      w.bar_join = v;
      w.addresses.push_back({});
      w.labels.push_back(x);
      std::vector<std::size_t> addr;
      td.rebuild(x, x, d, v, addr, w);
      return TreeDistResult{false, std::move(w)};
    }
  }
  return {};
}

}  // namespace ik
