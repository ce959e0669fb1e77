#include "ik/kripke.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ik {

std::size_t World::size(const std::string& sort) const {
  auto it = domain.find(sort);
  return it == domain.end() ? 0 : it->second.size();
}

std::size_t KripkeModel::add_world(std::string name) {
  worlds.push_back(World{std::move(name), {}, {}, {}});
  for (auto& row : leq) row.push_back(false);
  leq.emplace_back(worlds.size(), false);
  leq.back().back() = true;
  return worlds.size() - 1;
}

std::optional<std::size_t> KripkeModel::world_index(const std::string& name) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> KripkeModel::above(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < worlds.size(); ++v)
    if (leq[w][v]) out.push_back(v);
  return out;
}

Elem KripkeModel::transport(std::size_t from, std::size_t to, const std::string& sort,
                            Elem e) const {
  if (from == to) return e;
  auto it = maps.find({from, to});
  if (it == maps.end())
    throw std::invalid_argument("no transition " + worlds[from].name + " <= " + worlds[to].name);
  return it->second.at(sort).at(e);
}

void complete_model(KripkeModel& m) {
  const std::size_t n = m.worlds.size();
  for (auto& w : m.worlds)
    for (const auto& s : m.sig.sorts) w.domain[s];
  for (std::size_t i = 0; i < n; ++i) m.leq[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m.leq[i][k] && m.leq[k][j]) m.leq[i][j] = true;

  for (std::size_t w = 0; w < n; ++w) {
    auto& id = m.maps[{w, w}];
    for (const auto& s : m.sig.sorts)
      if (!id.count(s)) {
        std::vector<Elem> v(m.worlds[w].size(s));
        for (std::size_t e = 0; e < v.size(); ++e) v[e] = static_cast<Elem>(e);
        id[s] = v;
      }
  }
  for (auto& [key, tr] : m.maps)
    for (const auto& s : m.sig.sorts)
      if (!tr.count(s) && m.worlds[key.first].size(s) == 0) tr[s] = {};

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || !m.leq[i][j] || m.maps.count({i, j})) continue;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          auto a = m.maps.find({i, k});
          auto b = m.maps.find({k, j});
          if (a == m.maps.end() || b == m.maps.end()) continue;
          Transition t;
          bool ok = true;
          for (const auto& s : m.sig.sorts) {
            if (!a->second.count(s) || !b->second.count(s)) {
              ok = false;
              break;
            }
            const auto& first = a->second.at(s);
            const auto& second = b->second.at(s);
            std::vector<Elem> v;
            for (Elem e : first) {
              if (e >= second.size()) {
                ok = false;
                break;
              }
              v.push_back(second[e]);
            }
            t[s] = v;
          }
          if (!ok) continue;
          m.maps[{i, j}] = std::move(t);
          changed = true;
          break;
        }
      }
  }
}

// ---------------------------------------------------------------- validation

namespace {

// All tuples over the given sorts at world w, in lexicographic order.
template <class F>
void each_tuple(const World& w, const std::vector<std::string>& sorts, F f) {
  Tuple t(sorts.size(), 0);
  for (const auto& s : sorts)
    if (w.size(s) == 0) return;
  for (;;) {
    f(t);
    std::size_t i = sorts.size();
    while (i > 0) {
      --i;
      if (++t[i] < w.size(sorts[i])) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (sorts.empty()) return;
  }
}

std::string show_tuple(const World& w, const std::vector<std::string>& sorts, const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    const auto& dom = w.domain.at(sorts[i]);
    s += t[i] < dom.size() ? dom[t[i]] : "#" + std::to_string(t[i]);
  }
  return s + ")";
}

struct Invalid {
  std::string why;
};

void need(bool cond, const std::string& why) {
  if (!cond) throw Invalid{why};
}

void validate_world(const Signature& sig, const World& w) {
  for (const auto& s : sig.sorts) need(w.domain.count(s) > 0, w.name + ": no domain for sort " + s);
  for (const auto& [s, _] : w.domain) need(sig.has_sort(s), w.name + ": unknown sort " + s);
  for (const auto& [name, tuples] : w.rel) {
    auto it = sig.relations.find(name);
    need(it != sig.relations.end(), w.name + ": unknown relation " + name);
    for (const auto& t : tuples) {
      need(t.size() == it->second.size(), w.name + ": wrong arity in " + name);
      for (std::size_t i = 0; i < t.size(); ++i)
        need(t[i] < w.size(it->second[i]), w.name + ": element out of range in " + name);
    }
  }
  for (const auto& [name, table] : w.fun)
    need(sig.functions.count(name) > 0, w.name + ": unknown function " + name);
  for (const auto& [name, decl] : sig.functions) {
    auto it = w.fun.find(name);
    const std::map<Tuple, Elem> empty;
    const auto& table = it == w.fun.end() ? empty : it->second;
    std::size_t count = 0;
    each_tuple(w, decl.args, [&](const Tuple& t) {
      auto v = table.find(t);
      need(v != table.end(),
           w.name + ": " + name + " undefined at " + show_tuple(w, decl.args, t));
      need(v->second < w.size(decl.result), w.name + ": value of " + name + " out of range");
      ++count;
    });
    need(table.size() == count, w.name + ": " + name + " has entries outside its domain");
  }
}

void validate_maps(const KripkeModel& m) {
  const std::size_t n = m.worlds.size();
  for (const auto& [key, tr] : m.maps) {
    auto [i, j] = key;
    need(i < n && j < n, "transition between unknown worlds");
    need(m.leq[i][j], "transition " + m.worlds[i].name + " <= " + m.worlds[j].name +
                          " outside the order");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.leq[i][j]) continue;
      const auto& wi = m.worlds[i];
      const auto& wj = m.worlds[j];
      const std::string pair = wi.name + " <= " + wj.name;
      auto it = m.maps.find({i, j});
      need(it != m.maps.end(), "missing transition " + pair);
      const auto& tr = it->second;
      for (const auto& s : m.sig.sorts) {
        need(tr.count(s) > 0, "transition " + pair + " lacks sort " + s);
        const auto& h = tr.at(s);
        need(h.size() == wi.size(s), "transition " + pair + " has the wrong size on " + s);
        for (std::size_t e = 0; e < h.size(); ++e) {
          need(h[e] < wj.size(s), "transition " + pair + " leaves the domain of " + s);
          if (i == j) need(h[e] == e, "transition " + pair + " is not the identity");
        }
      }
      auto h = [&](const std::string& s, Elem e) { return tr.at(s)[e]; };
      for (const auto& [name, decl] : m.sig.functions)
        each_tuple(wi, decl.args, [&](const Tuple& t) {
          Tuple image;
          for (std::size_t k = 0; k < t.size(); ++k) image.push_back(h(decl.args[k], t[k]));
          need(h(decl.result, wi.fun.at(name).at(t)) == wj.fun.at(name).at(image),
               "transition " + pair + " does not commute with " + name + " at " +
                   show_tuple(wi, decl.args, t));
        });
      for (const auto& [name, tuples] : wi.rel) {
        const auto& sorts = m.sig.relations.at(name);
        auto target = wj.rel.find(name);
        for (const auto& t : tuples) {
          Tuple image;
          for (std::size_t k = 0; k < t.size(); ++k) image.push_back(h(sorts[k], t[k]));
          need(target != wj.rel.end() && target->second.count(image),
               "transition " + pair + " does not preserve " + name + show_tuple(wi, sorts, t));
        }
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (!m.leq[i][j] || !m.leq[j][k] || i == j || j == k) continue;
        for (const auto& s : m.sig.sorts) {
          const auto& ij = m.maps.at({i, j}).at(s);
          const auto& jk = m.maps.at({j, k}).at(s);
          const auto& ik = m.maps.at({i, k}).at(s);
          for (std::size_t e = 0; e < ij.size(); ++e)
            need(jk[ij[e]] == ik[e], "transitions " + m.worlds[i].name + " <= " +
                                         m.worlds[j].name + " <= " + m.worlds[k].name +
                                         " do not compose on " + s);
        }
      }
}

}  // namespace

Verdict validate_model(const KripkeModel& m) {
  try {
    const std::size_t n = m.worlds.size();
    need(m.leq.size() == n, "order has the wrong size");
    for (const auto& row : m.leq) need(row.size() == n, "order has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      need(m.leq[i][i], "order is not reflexive at " + m.worlds[i].name);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && m.leq[i][j] && m.leq[j][i])
          throw Invalid{"order is not antisymmetric: " + m.worlds[i].name + ", " +
                        m.worlds[j].name};
        for (std::size_t k = 0; k < n; ++k)
          need(!(m.leq[i][j] && m.leq[j][k]) || m.leq[i][k],
               "order is not transitive at " + m.worlds[i].name + " <= " + m.worlds[j].name +
                   " <= " + m.worlds[k].name);
      }
    }
    for (const auto& w : m.worlds) validate_world(m.sig, w);
    validate_maps(m);
  } catch (const Invalid& e) {
    return Verdict::reject(e.why);
  } catch (const std::out_of_range& e) {
    return Verdict::reject(std::string("incomplete tables: ") + e.what());
  }
  return Verdict::accept();
}

// ---------------------------------------------------------------- forcing

Elem eval(const KripkeModel& m, std::size_t w, const Environment& env, const Term& t) {
  if (t->kind == TermNode::Kind::Variable) {
    auto it = env.find(Var{t->name, t->sort});
    if (it == env.end()) throw std::invalid_argument("environment lacks variable '" + t->name + "'");
    return it->second;
  }
  Tuple args;
  for (const auto& a : t->args) args.push_back(eval(m, w, env, a));
  const auto& table = m.worlds[w].fun.at(t->name);
  auto it = table.find(args);
  if (it == table.end())
    throw std::invalid_argument("function '" + t->name + "' undefined at " + m.worlds[w].name);
  return it->second;
}

Environment transport_env(const KripkeModel& m, std::size_t from, std::size_t to,
                          const Environment& env) {
  if (from == to) return env;
  Environment out;
  const auto& tr = m.maps.at({from, to});
  for (const auto& [v, e] : env) out[v] = tr.at(v.sort).at(e);
  return out;
}

namespace {

template <class F>
bool all_extensions(const KripkeModel& m, std::size_t w, const Environment& env,
                    const std::vector<Var>& block, F f) {
  std::vector<std::string> sorts;
  for (const auto& v : block) sorts.push_back(v.sort);
  bool result = true;
  Environment ext = env;
  each_tuple(m.worlds[w], sorts, [&](const Tuple& t) {
    if (!result) return;
    for (std::size_t i = 0; i < block.size(); ++i) ext[block[i]] = t[i];
    if (!f(ext)) result = false;
  });
  return result;
}

}  // namespace

bool force(const KripkeModel& m, std::size_t w, const Environment& env, const Formula& phi) {
  switch (phi->conn) {
    case Conn::Top:
      return true;
    case Conn::Bottom:
      return false;
    case Conn::Atom: {
      Tuple t;
      for (const auto& a : phi->terms) t.push_back(eval(m, w, env, a));
      const auto& rels = m.worlds[w].rel;
      auto it = rels.find(phi->rel);
      return it != rels.end() && it->second.count(t) > 0;
    }
    case Conn::Equal:
      return eval(m, w, env, phi->terms[0]) == eval(m, w, env, phi->terms[1]);
    case Conn::And:
      return std::all_of(phi->kids.begin(), phi->kids.end(),
                         [&](const Formula& k) { return force(m, w, env, k); });
    case Conn::Or:
      return std::any_of(phi->kids.begin(), phi->kids.end(),
                         [&](const Formula& k) { return force(m, w, env, k); });
    case Conn::Implies:
      for (auto v : m.above(w)) {
        auto e = transport_env(m, w, v, env);
        if (force(m, v, e, phi->kids[0]) && !force(m, v, e, phi->kids[1])) return false;
      }
      return true;
    case Conn::Forall:
      for (auto v : m.above(w)) {
        auto e = transport_env(m, w, v, env);
        if (!all_extensions(m, v, e, phi->block,
                            [&](const Environment& x) { return force(m, v, x, phi->kids[0]); }))
          return false;
      }
      return true;
    case Conn::Exists:
      return !all_extensions(m, w, env, phi->block, [&](const Environment& x) {
        return !force(m, w, x, phi->kids[0]);
      });
  }
  return false;
}

std::vector<Environment> environments(const KripkeModel& m, std::size_t w, const Context& ctx) {
  std::vector<Environment> out;
  all_extensions(m, w, {}, ctx, [&](const Environment& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::optional<Refutation> refute_sequent(const KripkeModel& m, const Sequent& s) {
  for (std::size_t w = 0; w < m.worlds.size(); ++w)
    for (const auto& env : environments(m, w, s.context))
      if (force(m, w, env, s.antecedent) && !force(m, w, env, s.succedent))
        return Refutation{w, env};
  return std::nullopt;
}

bool holds_sequent(const KripkeModel& m, const Sequent& s) { return !refute_sequent(m, s); }

bool is_model_of(const KripkeModel& m, const Theory& t) {
  return std::all_of(t.begin(), t.end(),
                     [&](const NamedSequent& ax) { return holds_sequent(m, ax.sequent); });
}

std::string describe(const KripkeModel& m, const Refutation& r) {
  std::string s = "world " + m.worlds[r.world].name;
  for (const auto& [v, e] : r.env) s += ", " + v.name + "=" + m.worlds[r.world].domain.at(v.sort)[e];
  return s;
}

Verdict check_soundness(const std::vector<Sequent>& premises, const Sequent& conclusion,
                        const KripkeModel& m) {
  for (const auto& p : premises)
    if (!holds_sequent(m, p)) return Verdict::accept();
  if (auto r = refute_sequent(m, conclusion))
    return Verdict::reject("premises hold but the conclusion fails at " + describe(m, *r));
  return Verdict::accept();
}

}  // namespace ik
