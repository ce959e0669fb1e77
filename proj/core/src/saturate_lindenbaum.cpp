#include <algorithm>
#include <map>

#include "ik/saturate.hpp"

namespace ik {

namespace {

Substitution as_substitution(const Grounding& g, const Signature& sig) {
  Substitution sub;
  for (const auto& [v, c] : g) sub[v] = make_app(c, {}, sig.functions.at(c).result);
  return sub;
}

class FragmentBuilder {
public:
  explicit FragmentBuilder(const Signature& sig) : sig_(sig) {}

  void add(const Formula& phi) {
    if (!seen_.insert(print(phi)).second) return;
    out_.push_back(phi);
    switch (phi->conn) {
      case Conn::And:
      case Conn::Or:
      case Conn::Implies:
        for (const auto& k : phi->kids) add(k);
        break;
      case Conn::Exists:
      case Conn::Forall:
        for (const auto& g : groundings(sig_, phi->block))
          add(substitute(phi->kids[0], as_substitution(g, sig_)));
        break;
      default:
        break;
    }
  }

  std::vector<Formula> take() { return std::move(out_); }

private:
  const Signature& sig_;
  std::set<std::string> seen_;
  std::vector<Formula> out_;
};

}  // namespace

std::vector<Formula> ground_fragment(const TheoryFile& t, const Sequent& s, const Grounding& g) {
  FragmentBuilder b(t.sig);
  b.add(make_top());
  b.add(make_bottom());
  b.add(substitute(s.antecedent, as_substitution(g, t.sig)));
  b.add(substitute(s.succedent, as_substitution(g, t.sig)));
  for (const auto& a : t.axioms)
    for (const auto& h : groundings(t.sig, a.sequent.context)) {
      auto sub = as_substitution(h, t.sig);
      b.add(substitute(a.sequent.antecedent, sub));
      b.add(substitute(a.sequent.succedent, sub));
    }
  return b.take();
}

LindenbaumLattice lindenbaum(const TheoryFile& t, const std::vector<Formula>& fragment,
                             const SaturateLimits& lim, const std::vector<AtomSet>* subset) {
  HerbrandBase base(t.sig);
  auto models = subset ? *subset : herbrand_models(base, t.axioms, lim);
  auto denote = [&](const Formula& phi) {
    ElemSet d(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) d[i] = evaluate(base, models[i], phi, {});
    return d;
  };

  // Classes are sets of models; the lattice is generated under union and
  // intersection, with the theory's models as top and the empty set as bottom.
  std::vector<ElemSet> sets;
  std::vector<Formula> reps;
  std::map<ElemSet, std::size_t> index;
  auto intern = [&](const ElemSet& d, const Formula& rep) {
    auto [it, fresh] = index.emplace(d, sets.size());
    if (fresh) {
      if (sets.size() >= lim.max_lattice)
        throw ResourceError("Lindenbaum lattice exceeds " + std::to_string(lim.max_lattice) +
                            " elements");
      sets.push_back(d);
      reps.push_back(rep);
    }
    return it->second;
  };
  intern(denote(make_bottom()), make_bottom());
  intern(denote(make_top()), make_top());
  LindenbaumLattice out;
  FragmentBuilder closure(t.sig);
  for (const auto& phi : fragment) closure.add(phi);
  for (const auto& phi : closure.take()) {
    out.fragment.push_back(phi);
    out.class_of.push_back(intern(denote(phi), phi));
  }
  for (std::size_t done = 0; done < sets.size();) {
    std::size_t end = sets.size();
    for (std::size_t i = done; i < end; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        intern(sets[i] & sets[j], make_and({reps[j], reps[i]}));
        intern(sets[i] | sets[j], make_or({reps[j], reps[i]}));
      }
    done = end;
  }

  std::vector<std::string> names;
  std::vector<std::vector<bool>> rel(sets.size(), std::vector<bool>(sets.size()));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    names.push_back("e" + std::to_string(i));
    for (std::size_t j = 0; j < sets.size(); ++j) rel[i][j] = sets[i].is_subset_of(sets[j]);
  }
  out.lattice = FinLattice::from_poset(Poset::from_relation(names, rel));
  out.representative = reps;

  for (std::size_t i = 0; i < out.fragment.size(); ++i) {
    const auto& phi = out.fragment[i];
    Designated d{out.class_of[i], {}};
    if (phi->conn == Conn::Or || phi->conn == Conn::And) {
      for (const auto& k : phi->kids) d.family.push_back(index.at(denote(k)));
    } else if (phi->conn == Conn::Exists) {
      for (const auto& g : groundings(t.sig, phi->block))
        d.family.push_back(index.at(denote(substitute(phi->kids[0], as_substitution(g, t.sig)))));
    } else {
      continue;
    }
    if (d.family.empty()) continue;
    (phi->conn == Conn::And ? out.designated.meets : out.designated.joins).push_back(std::move(d));
  }
  return out;
}

CountermodelResult countermodel(const TheoryFile& t, const Sequent& s, const SaturateLimits& lim) {
  check_coherent_theory(t);
  if (!is_coherent(s)) throw std::invalid_argument("countermodel: the sequent is not coherent");
  CountermodelResult r;
  if (entails(t, s, lim)) {
    r.entailed = true;
    return r;
  }
  HerbrandBase base(t.sig);
  std::optional<Grounding> where;
  for (const auto& g : groundings(t.sig, s.context)) {
    auto sub = as_substitution(g, t.sig);
    Sequent inst{substitute(s.antecedent, sub), {}, substitute(s.succedent, sub)};
    if (!entails_by_chase(base, t.axioms, inst, lim)) {
      where = g;
      break;
    }
  }
  if (!where) throw std::logic_error("countermodel: no refuted instance of " + print(s));
  r.grounding = *where;

  auto sub = as_substitution(*where, t.sig);
  Formula ant = substitute(s.antecedent, sub), succ = substitute(s.succedent, sub);
  auto frag = ground_fragment(t, s, *where);
  std::optional<LindenbaumLattice> full;
  try {
    full = lindenbaum(t, frag, lim);
  } catch (const ResourceError&) {
    std::vector<AtomSet> refuting;
    for (const auto& m : herbrand_models(base, t.axioms, lim))
      if (evaluate(base, m, ant, {}) && !evaluate(base, m, succ, {})) refuting.push_back(m);
    std::vector<AtomSet> minimal;
    for (const auto& m : refuting)
      if (std::none_of(refuting.begin(), refuting.end(),
                       [&](const AtomSet& o) { return o != m && o.is_subset_of(m); }))
        minimal.push_back(m);
    full = lindenbaum(t, frag, lim, &minimal);
    r.restricted = true;
  }
  auto& lb = *full;
  r.lattice_size = lb.lattice.size();
  auto class_of = [&](const Formula& phi) {
    auto key = print(phi);
    for (std::size_t i = 0; i < lb.fragment.size(); ++i)
      if (print(lb.fragment[i]) == key) return lb.class_of[i];
    throw std::logic_error("countermodel: goal missing from the fragment");
  };
  LElem a = class_of(ant), b = class_of(succ);
  auto rs = rs_filter(lb.lattice, lb.designated, a, b);
  if (!rs.filter)
    throw std::logic_error("countermodel: no prime filter separates the goal\n" + rs.certificate);

  AtomSet m = base.empty();
  for (std::size_t i = 0; i < lb.fragment.size(); ++i) {
    const auto& phi = lb.fragment[i];
    if (phi->conn != Conn::Atom || !rs.filter->members[lb.class_of[i]]) continue;
    GroundAtom atom{phi->rel, {}};
    for (const auto& term : phi->terms) atom.args.push_back(constant_of(term, {}));
    m[*base.find(atom)] = true;
  }
  if (!satisfies(base, m, t.axioms))
    throw std::logic_error("countermodel: term model " + print_model(base, m) +
                           " violates the theory");
  if (!evaluate(base, m, s.antecedent, *where) || evaluate(base, m, s.succedent, *where))
    throw std::logic_error("countermodel: term model " + print_model(base, m) +
                           " does not refute the goal");
  r.model = m;
  return r;
}

}  // namespace ik
