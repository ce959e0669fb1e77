#include <stdexcept>

#include "ik/kripke.hpp"

namespace ik {

namespace {

constexpr Elem kUnset = ~Elem{0};

std::vector<Tuple> tuples_over(const World& w, const std::vector<std::string>& sorts) {
  std::vector<Tuple> out{Tuple{}};
  for (const auto& s : sorts) {
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (Elem e = 0; e < w.size(s); ++e) {
        auto u = t;
        u.push_back(e);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

Tuple image(const Transition& h, const std::vector<std::string>& sorts, const Tuple& t) {
  Tuple out;
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(h.at(sorts[i])[t[i]]);
  return out;
}

// One attempt; returns false when forced values clash.
bool try_build(Rng& rng, KripkeModel& m, const ModelGenOptions& opts) {
  const auto& sig = m.sig;
  const std::size_t n = uniform(rng, 1, std::max<std::size_t>(1, opts.max_worlds));
  for (std::size_t i = 0; i < n; ++i) m.add_world("w" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.leq[i][j] = coin(rng, opts.order_density);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m.leq[i][k] && m.leq[k][j]) m.leq[i][j] = true;

  for (std::size_t j = 0; j < n; ++j) {
    World& wj = m.worlds[j];
    for (const auto& s : sig.sorts) {
      std::size_t size = uniform(rng, 1, std::max<std::size_t>(1, opts.max_elems));
      for (std::size_t e = 0; e < size; ++e) wj.domain[s].push_back("a" + std::to_string(e));
    }
    std::vector<std::size_t> preds;
    for (std::size_t k = 0; k < j; ++k)
      if (m.leq[k][j]) preds.push_back(k);

    for (auto k : preds) {
      Transition h;
      for (const auto& s : sig.sorts) {
        std::vector<Elem> v(m.worlds[k].size(s), kUnset);
        for (auto i : preds) {
          if (i >= k || !m.leq[i][k]) continue;
          const auto& ik = m.maps.at({i, k}).at(s);
          const auto& ij = m.maps.at({i, j}).at(s);
          for (std::size_t b = 0; b < ik.size(); ++b) {
            if (v[ik[b]] == kUnset)
              v[ik[b]] = ij[b];
            else if (v[ik[b]] != ij[b])
              return false;
          }
        }
        for (auto& e : v)
          if (e == kUnset) e = static_cast<Elem>(uniform(rng, 0, wj.size(s) - 1));
        h[s] = std::move(v);
      }
      m.maps[{k, j}] = std::move(h);
    }

    for (const auto& [name, decl] : sig.functions) {
      auto& table = wj.fun[name];
      for (auto k : preds) {
        const auto& h = m.maps.at({k, j});
        for (const auto& [args, val] : m.worlds[k].fun.at(name)) {
          auto key = image(h, decl.args, args);
          Elem want = h.at(decl.result)[val];
          auto [it, fresh] = table.emplace(key, want);
          if (!fresh && it->second != want) return false;
        }
      }
      for (const auto& t : tuples_over(wj, decl.args))
        if (!table.count(t))
          table[t] = static_cast<Elem>(uniform(rng, 0, wj.size(decl.result) - 1));
    }

    for (const auto& [name, sorts] : sig.relations) {
      auto& tuples = wj.rel[name];
      for (auto k : preds) {
        auto it = m.worlds[k].rel.find(name);
        if (it == m.worlds[k].rel.end()) continue;
        for (const auto& t : it->second) tuples.insert(image(m.maps.at({k, j}), sorts, t));
      }
      for (const auto& t : tuples_over(wj, sorts))
        if (coin(rng, opts.density)) tuples.insert(t);
    }
  }
  complete_model(m);
  return true;
}

}  // namespace

KripkeModel random_model(Rng& rng, const Signature& sig, const ModelGenOptions& opts) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    KripkeModel m;
    m.sig = sig;
    if (!try_build(rng, m, opts)) continue;
    if (validate_model(m).ok) return m;
  }
  throw std::runtime_error("random_model: could not build a valid model");
}

}  // namespace ik
