#include <algorithm>
#include <map>
#include <sstream>

#include "ik/saturate.hpp"

namespace ik {

namespace {

Context context_of(const VarSet& vs) { return Context(vs.begin(), vs.end()); }

Context union_context(const Formula& a, const Formula& b) {
  auto vs = free_vars(a);
  auto more = free_vars(b);
  vs.insert(more.begin(), more.end());
  return context_of(vs);
}

void collect(const Formula& phi, std::set<std::string>& seen, std::vector<Formula>& out) {
  if (!seen.insert(print(phi)).second) return;
  out.push_back(phi);
  for (const auto& k : phi->kids) collect(k, seen, out);
}

}  // namespace

std::vector<Formula> subformulas(const std::vector<Formula>& roots) {
  std::set<std::string> seen;
  std::vector<Formula> out;
  for (const auto& r : roots) collect(r, seen, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const Formula& a, const Formula& b) { return depth(a) < depth(b); });
  return out;
}

Formula Morleyized::atom_for(std::size_t i) const {
  std::vector<Term> ts;
  for (const auto& v : args[i]) ts.push_back(make_var(v));
  return make_atom(predicate[i], std::move(ts));
}

std::optional<std::size_t> Morleyized::index_of(const Formula& phi) const {
  auto key = print(phi);
  for (std::size_t i = 0; i < fragment.size(); ++i)
    if (print(fragment[i]) == key) return i;
  return std::nullopt;
}

Morleyized morleyize(const TheoryFile& t, const std::vector<Formula>& fragment) {
  Morleyized m;
  std::vector<Formula> roots = fragment;
  for (const auto& a : t.axioms) {
    roots.push_back(a.sequent.antecedent);
    roots.push_back(a.sequent.succedent);
  }
  m.fragment = subformulas(roots);
  m.theory.sig = t.sig;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.fragment.size(); ++i) {
    index[print(m.fragment[i])] = i;
    m.predicate.push_back(std::string(kReservedPrefix) + "m" + std::to_string(i));
    m.args.push_back(context_of(free_vars(m.fragment[i])));
    std::vector<std::string> sorts;
    for (const auto& v : m.args.back()) sorts.push_back(v.sort);
    m.theory.sig.add_relation(m.predicate.back(), sorts);
  }
  auto P = [&](const Formula& phi) { return m.atom_for(index.at(print(phi))); };
  auto add = [&](const std::string& name, Formula lhs, Formula rhs, Context ctx) {
    m.theory.axioms.push_back({name, Sequent{std::move(lhs), std::move(ctx), std::move(rhs)}});
  };
  auto both = [&](const std::string& name, const Formula& lhs, const Formula& rhs) {
    auto ctx = union_context(lhs, rhs);
    add(name, lhs, rhs, ctx);
    add(name + "'", rhs, lhs, ctx);
  };

  for (std::size_t i = 0; i < m.fragment.size(); ++i) {
    const auto& chi = m.fragment[i];
    const auto name = "link" + std::to_string(i);
    auto self = m.atom_for(i);
    std::vector<Formula> kids;
    for (const auto& k : chi->kids) kids.push_back(P(k));
    switch (chi->conn) {
      case Conn::Atom:
      case Conn::Equal:
        both(name, self, chi);
        break;
      case Conn::Top:
        add(name, make_top(), self, {});
        break;
      case Conn::Bottom:
        add(name, self, make_bottom(), {});
        break;
      case Conn::And:
        both(name, self, make_and(kids));
        break;
      case Conn::Or:
        both(name, self, make_or(kids));
        break;
      case Conn::Exists:
        both(name, self, make_exists(chi->block, kids[0]));
        break;
      case Conn::Implies: {
        auto lhs = make_and({self, kids[0]});
        add(name, lhs, kids[1], union_context(lhs, kids[1]));
        break;
      }
      case Conn::Forall: {
        auto ctx = m.args[i];
        for (const auto& v : chi->block) ctx.push_back(v);
        add(name, self, kids[0], ctx);
        break;
      }
    }
  }
  for (const auto& a : t.axioms)
    add("ax_" + a.name, P(a.sequent.antecedent), P(a.sequent.succedent), a.sequent.context);
  return m;
}

KripkeModel kripke_from_herbrand(const HerbrandBase& base, const std::vector<AtomSet>& worlds,
                                 const Signature& sig) {
  KripkeModel k;
  k.sig = sig;
  std::map<std::string, Elem> position;
  for (const auto& s : sig.sorts) {
    auto cs = sig.constants_of(s);
    for (std::size_t i = 0; i < cs.size(); ++i) position[cs[i]] = static_cast<Elem>(i);
  }
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    k.add_world("h" + std::to_string(w));
    World& world = k.worlds[w];
    for (const auto& s : sig.sorts) world.domain[s] = sig.constants_of(s);
    for (const auto& [name, decl] : sig.functions) world.fun[name][Tuple{}] = position.at(name);
    for (const auto& [rel, sorts] : sig.relations) world.rel[rel];
    for (auto i = worlds[w].find_first(); i != AtomSet::npos; i = worlds[w].find_next(i)) {
      const auto& atom = base.atom(i);
      if (!sig.relations.count(atom.rel)) continue;
      Tuple t;
      for (const auto& c : atom.args) t.push_back(position.at(c));
      world.rel[atom.rel].insert(t);
    }
  }
  for (std::size_t a = 0; a < worlds.size(); ++a)
    for (std::size_t b = 0; b < worlds.size(); ++b)
      if (worlds[a].is_subset_of(worlds[b])) {
        k.leq[a][b] = true;
        Transition id;
        for (const auto& s : sig.sorts) {
          std::vector<Elem> v(sig.constants_of(s).size());
          for (std::size_t e = 0; e < v.size(); ++e) v[e] = static_cast<Elem>(e);
          id[s] = v;
        }
        k.maps[{a, b}] = std::move(id);
      }
  complete_model(k);
  return k;
}

namespace {

// Smaller worlds first, so that the order is compatible with indices.
void sort_worlds(std::vector<AtomSet>& ws) {
  std::sort(ws.begin(), ws.end(), [](const AtomSet& a, const AtomSet& b) {
    return a.count() != b.count() ? a.count() < b.count() : a < b;
  });
}

}  // namespace

KripkeModel canonical_kripke(const TheoryFile& tm, const SaturateLimits& lim) {
  check_coherent_theory(tm);
  HerbrandBase base(tm.sig);
  auto worlds = herbrand_models(base, tm.axioms, lim);
  sort_worlds(worlds);
  return kripke_from_herbrand(base, worlds, tm.sig);
}

// ---------------------------------------------------------------- Hintikka reduction

namespace {

class ForcingTable {
public:
  ForcingTable(const Morleyized& m, const HerbrandBase& base, const std::vector<AtomSet>& worlds)
      : m_(m), base_(base), worlds_(worlds) {
    for (std::size_t i = 0; i < m.fragment.size(); ++i) index_[print(m.fragment[i])] = i;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
      above_.emplace_back();
      for (std::size_t v = 0; v < worlds.size(); ++v)
        if (worlds[w].is_subset_of(worlds[v])) above_.back().push_back(v);
    }
  }

  // Forcing of fragment formula i under g at every world.
  const std::vector<bool>& forced(std::size_t i, const Grounding& g) {
    std::vector<std::string> key;
    for (const auto& v : m_.args[i]) key.push_back(g.at(v));
    auto memo_key = std::make_pair(i, key);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;

    const auto& chi = m_.fragment[i];
    const std::size_t n = worlds_.size();
    std::vector<bool> out(n);
    auto kid = [&](std::size_t k) { return index_.at(print(chi->kids[k])); };
    auto extended = [&](const Grounding& h) {
      Grounding e = g;
      for (const auto& [v, c] : h) e[v] = c;
      return e;
    };
    switch (chi->conn) {
      case Conn::Atom:
      case Conn::Equal:
      case Conn::Top:
      case Conn::Bottom:
        for (std::size_t w = 0; w < n; ++w) out[w] = evaluate(base_, worlds_[w], chi, g);
        break;
      case Conn::And:
      case Conn::Or: {
        bool conj = chi->conn == Conn::And;
        out.assign(n, conj);
        for (std::size_t k = 0; k < chi->kids.size(); ++k) {
          const auto& f = forced(kid(k), g);
          for (std::size_t w = 0; w < n; ++w) out[w] = conj ? out[w] && f[w] : out[w] || f[w];
        }
        break;
      }
      case Conn::Exists:
        for (const auto& h : groundings(base_.sig(), chi->block)) {
          const auto& f = forced(kid(0), extended(h));
          for (std::size_t w = 0; w < n; ++w) out[w] = out[w] || f[w];
        }
        break;
      case Conn::Implies: {
        const auto& a = forced(kid(0), g);
        const auto& b = forced(kid(1), g);
        for (std::size_t w = 0; w < n; ++w)
          out[w] = std::all_of(above_[w].begin(), above_[w].end(),
                               [&](std::size_t v) { return !a[v] || b[v]; });
        break;
      }
      case Conn::Forall: {
        out.assign(n, true);
        for (const auto& h : groundings(base_.sig(), chi->block)) {
          const auto& f = forced(kid(0), extended(h));
          for (std::size_t w = 0; w < n; ++w)
            out[w] = out[w] && std::all_of(above_[w].begin(), above_[w].end(),
                                           [&](std::size_t v) { return bool(f[v]); });
        }
        break;
      }
    }
    return memo_.emplace(memo_key, std::move(out)).first->second;
  }

private:
  const Morleyized& m_;
  const HerbrandBase& base_;
  const std::vector<AtomSet>& worlds_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> above_;
  std::map<std::pair<std::size_t, std::vector<std::string>>, std::vector<bool>> memo_;
};

}  // namespace

CanonicalModel hintikka_model(const Morleyized& m, const SaturateLimits& lim) {
  for (const auto& phi : m.fragment)
    if (depth(phi) > lim.max_depth)
      throw ResourceError("fragment formula deeper than " + std::to_string(lim.max_depth));
  CanonicalModel c{HerbrandBase(m.theory.sig), {}, 0};
  c.worlds = herbrand_models(c.base, m.theory.axioms, lim);
  sort_worlds(c.worlds);

  std::vector<std::size_t> order(m.fragment.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depth(m.fragment[a]) < depth(m.fragment[b]);
  });

  for (;;) {
    ForcingTable table(m, c.base, c.worlds);
    std::vector<bool> bad(c.worlds.size());
    std::optional<std::size_t> level;
    for (auto i : order) {
      auto d = depth(m.fragment[i]);
      if (level && d > *level) break;
      for (const auto& g : groundings(c.base.sig(), m.args[i])) {
        const auto& f = table.forced(i, g);
        GroundAtom atom{m.predicate[i], {}};
        for (const auto& v : m.args[i]) atom.args.push_back(g.at(v));
        auto at = *c.base.find(atom);
        for (std::size_t w = 0; w < c.worlds.size(); ++w)
          if (f[w] != c.worlds[w][at]) {
            bad[w] = true;
            level = d;
          }
      }
    }
    if (!level) break;
    std::vector<AtomSet> keep;
    for (std::size_t w = 0; w < c.worlds.size(); ++w)
      if (!bad[w]) keep.push_back(c.worlds[w]);
    c.eliminated += c.worlds.size() - keep.size();
    c.worlds = std::move(keep);
  }
  return c;
}

// ---------------------------------------------------------------- provability

std::string ProofResult::certificate() const {
  std::ostringstream out;
  if (provable) {
    out << "# forced at all " << worlds << " worlds of the canonical model\n";
    return out.str();
  }
  return write_model(model, refutation ? &*refutation : nullptr);
}

ProofResult provable_ik(const TheoryFile& t, const Sequent& s, const SaturateLimits& lim) {
  if (t.sig.has_proper_functions()) throw SortError("provable_ik needs constants only");
  check_sequent(t.sig, s);
  auto m = morleyize(t, {s.antecedent, s.succedent});
  auto c = hintikka_model(m, lim);
  ProofResult r;
  r.worlds = c.worlds.size();
  r.eliminated = c.eliminated;
  r.fragment = m.fragment.size();
  r.model = kripke_from_herbrand(c.base, c.worlds, t.sig);
  if (auto v = validate_model(r.model); !v.ok)
    throw std::logic_error("canonical model is not a Kripke model: " + v.reason);
  if (!is_model_of(r.model, t.axioms))
    throw std::logic_error("canonical model violates the theory");
  r.refutation = refute_sequent(r.model, s);
  r.provable = !r.refutation;
  return r;
}

PropertyWitness disjunction_property(const TheoryFile& t, const std::vector<Formula>& disjuncts,
                                     const SaturateLimits& lim) {
  PropertyWitness w;
  w.premise = provable_ik(t, Sequent{make_top(), {}, make_or(disjuncts)}, lim).provable;
  if (!w.premise) return w;
  for (std::size_t i = 0; i < disjuncts.size(); ++i)
    if (provable_ik(t, Sequent{make_top(), {}, disjuncts[i]}, lim).provable) {
      w.index = i;
      break;
    }
  return w;
}

PropertyWitness existence_property(const TheoryFile& t, const Formula& exists,
                                   const SaturateLimits& lim) {
  if (exists->conn != Conn::Exists) throw std::invalid_argument("not an existential formula");
  PropertyWitness w;
  w.premise = provable_ik(t, Sequent{make_top(), {}, exists}, lim).provable;
  if (!w.premise) return w;
  for (const auto& g : groundings(t.sig, exists->block)) {
    Substitution sub;
    for (const auto& [v, c] : g) sub[v] = make_app(c, {}, v.sort);
    if (provable_ik(t, Sequent{make_top(), {}, substitute(exists->kids[0], sub)}, lim).provable) {
      w.terms = g;
      break;
    }
  }
  return w;
}

}  // namespace ik
