#include <set>

#include "ik/lattice.hpp"

namespace ik {

namespace {

std::vector<std::vector<bool>> empty_relation(std::size_t n) {
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) rel[i][i] = true;
  return rel;
}

bool transitive(const std::vector<std::vector<bool>>& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j])
        for (std::size_t k = 0; k < n; ++k)
          if (r[j][k] && !r[i][k]) return false;
  return true;
}

// Naturally labelled orders on m points: i < j only if i < j as numbers.
template <class F>
void each_natural_order(std::size_t m, F f) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) slots.emplace_back(i, j);
  if (slots.size() >= 32) throw LatticeError("catalog: too many points");
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    auto rel = empty_relation(m);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) rel[slots[s].first][slots[s].second] = true;
    if (transitive(rel)) f(rel);
  }
}

std::vector<std::string> point_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

}  // namespace

std::vector<Poset> poset_catalog(std::size_t n) {
  std::vector<Poset> out;
  std::set<std::string> seen;
  each_natural_order(n, [&](const std::vector<std::vector<bool>>& rel) {
    Poset p{point_names(n), rel};
    if (seen.insert(canonical_form(p)).second) out.push_back(std::move(p));
  });
  return out;
}

std::vector<FinLattice> lattice_catalog(std::size_t n) {
  if (n > 8) throw LatticeError("lattice catalog is limited to 8 elements");
  if (n == 0) return {};
  if (n <= 2) return {chain_lattice(n)};
  std::vector<FinLattice> out;
  std::set<std::string> seen;
  const std::size_t m = n - 2;
  each_natural_order(m, [&](const std::vector<std::vector<bool>>& inner) {
    std::vector<std::string> names{"0"};
    for (std::size_t i = 0; i < m; ++i) names.push_back(std::string(1, char('a' + i)));
    names.push_back("1");
    auto rel = empty_relation(n);
    for (std::size_t i = 0; i < n; ++i) {
      rel[0][i] = true;
      rel[i][n - 1] = true;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) rel[i + 1][j + 1] = inner[i][j];
    Poset p{names, rel};
    auto key = canonical_form(p);
    if (seen.count(key)) return;
    try {
      out.push_back(FinLattice::from_poset(p));
      seen.insert(key);
    } catch (const LatticeError&) {
    }
  });
  return out;
}

std::vector<FinLattice> distributive_catalog(std::size_t n) {
  // Birkhoff: distributive lattices with n elements are the down-set lattices
  // of posets. Posets are grown by adding a new maximal point above a
  // down-closed set; the down-set count only grows, so large ones are pruned.
  if (n == 0) return {};
  std::vector<FinLattice> out;
  std::set<std::string> seen_posets, seen_lattices;
  auto count_downsets = [](const Poset& p) {
    std::size_t c = 0;
    const std::size_t k = p.size();
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      bool closed = true;
      for (std::size_t i = 0; i < k && closed; ++i)
        if (mask >> i & 1)
          for (std::size_t j = 0; j < k; ++j)
            if (p.leq[j][i] && !(mask >> j & 1)) {
              closed = false;
              break;
            }
      c += closed;
    }
    return c;
  };
  std::vector<Poset> frontier{Poset{}};
  while (!frontier.empty()) {
    std::vector<Poset> next;
    for (const auto& p : frontier) {
      auto c = count_downsets(p);
      if (c > n) continue;
      if (c == n) {
        auto L = downsets_lattice(p);
        auto key = canonical_form(L.order());
        if (seen_lattices.insert(key).second) out.push_back(std::move(L));
      }
      const std::size_t k = p.size();
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        bool closed = true;
        for (std::size_t i = 0; i < k && closed; ++i)
          if (mask >> i & 1)
            for (std::size_t j = 0; j < k; ++j)
              if (p.leq[j][i] && !(mask >> j & 1)) {
                closed = false;
                break;
              }
        if (!closed) continue;
        auto rel = empty_relation(k + 1);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) rel[i][j] = p.leq[i][j];
          rel[i][k] = mask >> i & 1;
        }
        Poset q{point_names(k + 1), rel};
        if (seen_posets.insert(canonical_form(q)).second) next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace ik
