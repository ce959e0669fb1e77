#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ik/calculus.hpp"
#include "ik/instances.hpp"
#include "ik/kripke.hpp"
#include "ik/lattice.hpp"
#include "ik/saturate.hpp"

namespace ik::suite {

namespace {

std::size_t scaled(std::size_t n, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n * scale)));
}

void fail(Outcome& o, const std::string& why) {
  if (o.failures++ == 0) o.detail = why;
}

Outcome finish(Outcome o, const std::string& summary) {
  o.pass = o.failures == 0;
  if (o.pass) o.detail = summary;
  return o;
}

// Distributivity and primeness straight from the definitions.
bool distributive_by_definition(const FinLattice& L) {
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b)
      for (LElem c = 0; c < L.size(); ++c)
        if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))) return false;
  return true;
}

bool prime_by_definition(const FinLattice& L, const ElemSet& f) {
  if (!f[L.top()] || f[L.bottom()]) return false;
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b) {
      if (f[a] && L.leq(a, b) && !f[b]) return false;
      if (f[a] && f[b] && !f[L.meet(a, b)]) return false;
      if (f[L.join(a, b)] && !f[a] && !f[b]) return false;
    }
  return true;
}

FinLattice m3() {
  return parse_lattice_file(
             "elements 0 x y z 1\nleq 0 x\nleq 0 y\nleq 0 z\nleq x 1\nleq y 1\nleq z 1\n")
      .lattice;
}

// ---------------------------------------------------------------- calculus and forcing

Outcome soundness(std::uint64_t seed, double scale) {
  Rng rng(seed);
  auto sig = sample_signature();
  sig.conn_bound = 16;  // bars of a 3-branching tree of height 2 have 9 nodes
  ModelGenOptions shape;
  shape.max_worlds = 3;
  shape.max_elems = 2;
  auto rules = all_rules();
  std::map<Rule, std::size_t> live;
  Outcome o;
  const std::size_t pairs = scaled(10'000, scale);
  for (std::size_t i = 0; i < pairs; ++i) {
    Rule rule = rules[i % rules.size()];
    auto inst = random_instance(rng, sig, rule);
    auto accepted = check_rule_instance(rule, inst.payload, inst.premises, inst.conclusion);
    if (!accepted.ok) {
      fail(o, "generated instance rejected: " + accepted.reason);
      continue;
    }
    auto m = random_model(rng, sig, shape);
    auto premises = inst.premises;
    if (rule == Rule::TheoryAxiom) premises.push_back(inst.conclusion);
    if (std::all_of(premises.begin(), premises.end(),
                    [&](const Sequent& s) { return holds_sequent(m, s); }))
      ++live[rule];
    auto v = check_soundness(premises, inst.conclusion, m);
    ++o.checked;
    if (!v.ok) fail(o, rule_name(rule) + ": " + v.reason);
  }
  std::size_t least = pairs;
  for (auto r : rules) least = std::min(least, live[r]);
  if (pairs >= rules.size() && least == 0) fail(o, "some rule never had all premises true");
  return finish(o, std::to_string(o.checked) + " pairs over " + std::to_string(rules.size()) +
                       " rules, min non-vacuous per rule " + std::to_string(least));
}

Outcome distributive_axiom(std::uint64_t seed, double scale) {
  Rng rng(seed);
  auto sig = sample_signature();
  Outcome o;
  std::size_t worlds = 0;
  for (std::size_t i = 0, n = scaled(500, scale); i < n; ++i) {
    std::size_t width = 1 + i % 4;
    auto m = random_model(rng, sig);
    auto phi = random_formula(rng, sig, {});
    std::vector<Formula> clauses, psis;
    for (std::size_t k = 0; k < width; ++k) {
      psis.push_back(random_formula(rng, sig, {}));
      clauses.push_back(make_or({phi, psis.back()}));
    }
    auto law = make_imp(make_and(clauses), make_or({phi, make_and(psis)}));
    ++o.checked;
    for (std::size_t w = 0; w < m.worlds.size(); ++w, ++worlds)
      if (!force(m, w, {}, law)) fail(o, "not forced at " + m.worlds[w].name + ": " + print(law));
  }
  return finish(o, std::to_string(o.checked) + " models, " + std::to_string(worlds) + " worlds");
}

Outcome distributive_law(std::uint64_t seed, double scale) {
  Rng rng(seed);
  auto sig = sample_signature();
  Context scope{Var{"x", "S"}};
  Outcome o;
  for (std::size_t width = 1; width <= 4; ++width)
    for (std::size_t i = 0, n = scaled(25, scale); i < n; ++i) {
      const Context& ctx = i % 2 ? scope : Context{};
      auto phi = random_formula(rng, sig, ctx);
      std::vector<Formula> psis;
      for (std::size_t k = 0; k < width; ++k) psis.push_back(random_formula(rng, sig, ctx));
      auto d = derive_distributive_law(phi, psis, &sig);
      auto v = check_derivation(*d, {}, &sig);
      ++o.checked;
      if (!v.ok) fail(o, "width " + std::to_string(width) + ": " + v.reason);
      std::vector<Formula> clauses;
      for (const auto& p : psis) clauses.push_back(make_or({phi, p}));
      if (!schema_equal(d->conclusion.antecedent, make_and(clauses)) ||
          !schema_equal(d->conclusion.succedent, make_or({phi, make_and(psis)})))
        fail(o, "unexpected conclusion " + print(d->conclusion));
    }
  return finish(o, std::to_string(o.checked) + " derivations at widths 1-4");
}

// ---------------------------------------------------------------- lattices

Outcome filter_lemma(std::uint64_t, double) {
  Outcome o;
  std::size_t lattices = 0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& L : lattice_catalog(n)) {
      if (!distributive_by_definition(L)) continue;
      ++lattices;
      auto primes = prime_filters(L);
      for (LElem a = 0; a < L.size(); ++a)
        for (LElem b = 0; b < L.size(); ++b) {
          if (L.leq(a, b)) continue;
          ++o.checked;
          auto f = construct_filter(L, {}, a, b).filter.members;
          if (!prime_by_definition(L, f) || !f[a] || f[b]) {
            fail(o, "bad filter " + print_set(L, f) + " for " + L.name(a) + " / " + L.name(b));
            continue;
          }
          if (std::none_of(primes.begin(), primes.end(),
                           [&](const Filter& p) { return p.members == f; }))
            fail(o, "filter " + print_set(L, f) + " missing from prime_filters");
        }
      std::size_t by_definition = 0;
      ElemSet s(L.size());
      for (std::uint64_t mask = 0; mask < (1ull << L.size()); ++mask) {
        for (LElem x = 0; x < L.size(); ++x) s[x] = mask >> x & 1;
        by_definition += prime_by_definition(L, s);
      }
      if (by_definition != primes.size()) fail(o, "prime filter count differs from enumeration");
    }
  auto M3 = m3();
  if (is_distributive(M3) || distributive_by_definition(M3)) fail(o, "M3 reported distributive");
  if (spectrum(M3).separation_ok) fail(o, "M3 spectrum separates points");
  return finish(o, std::to_string(o.checked) + " pairs in " + std::to_string(lattices) +
                       " distributive lattices; M3 rejected");
}

Outcome duality(std::uint64_t, double) {
  Outcome o;
  std::size_t posets = 0;
  for (std::size_t n = 1; n <= 10; ++n)
    for (const auto& L : distributive_catalog(n)) {
      ++o.checked;
      auto r = duality_roundtrip(L);
      if (!r.ok) fail(o, "lattice of size " + std::to_string(n) + ": " + r.witness);
    }
  for (std::size_t n = 0; n <= 5; ++n)
    for (const auto& p : poset_catalog(n)) {
      ++posets;
      auto r = poset_roundtrip(p);
      if (!r.ok) fail(o, "poset of size " + std::to_string(n) + ": " + r.witness);
    }
  return finish(o, std::to_string(o.checked) + " lattices, " + std::to_string(posets) + " posets");
}

Outcome tree_distributivity(std::uint64_t, double) {
  Outcome o;
  std::size_t distributive = 0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& L : lattice_catalog(n)) {
      ++o.checked;
      bool expected = distributive_by_definition(L);
      distributive += expected;
      auto r = is_tree_distributive(L, 2, 2);
      if (r.holds != expected)
        fail(o, "size " + std::to_string(n) + ": tree-distributive " + (r.holds ? "yes" : "no") +
                    ", distributive " + (expected ? "yes" : "no"));
    }
  return finish(o, std::to_string(o.checked) + " lattices, " + std::to_string(distributive) +
                       " distributive");
}

// ---------------------------------------------------------------- coherent theories

Outcome coherent_theories(std::uint64_t seed, double scale) {
  Rng rng(seed);
  Outcome o;
  std::size_t refuted = 0, restricted = 0;
  for (std::size_t i = 0, n = scaled(1000, scale); i < n; ++i) {
    auto t = random_coherent_theory(rng);
    auto s = random_coherent_sequent(rng, t.sig);
    ++o.checked;
    try {
      bool e = entails(t, s);
      auto r = countermodel(t, s);
      if (r.entailed != e) {
        fail(o, "entails and countermodel disagree on " + print(s));
        continue;
      }
      if (e) continue;
      ++refuted;
      restricted += r.restricted;
      HerbrandBase base(t.sig);
      if (!r.model || !satisfies(base, *r.model, t.axioms) || satisfies(base, *r.model, s))
        fail(o, "countermodel does not re-verify for " + print(s));
    } catch (const std::exception& e) {
      fail(o, std::string("theory ") + std::to_string(i) + ": " + e.what());
    }
  }
  return finish(o, std::to_string(o.checked) + " theories, " + std::to_string(refuted) +
                       " countermodels (" + std::to_string(restricted) + " via restriction)");
}

// ---------------------------------------------------------------- Kripke completeness

TheoryFile small_theory(const std::string& decls) { return parse_theory_file(decls); }

bool certificate_refutes(const ProofResult& r, const Sequent& s) {
  auto cert = parse_model_file(r.certificate());
  if (!cert.refuted_at || !validate_model(cert.model).ok) return false;
  Environment env;
  for (const auto& v : s.context) {
    auto it = cert.env.find(v.name);
    if (it == cert.env.end()) return false;
    const auto& dom = cert.model.worlds[*cert.refuted_at].domain.at(v.sort);
    auto pos = std::find(dom.begin(), dom.end(), it->second);
    if (pos == dom.end()) return false;
    env[v] = static_cast<Elem>(pos - dom.begin());
  }
  return force(cert.model, *cert.refuted_at, env, s.antecedent) &&
         !force(cert.model, *cert.refuted_at, env, s.succedent);
}

Outcome kripke_completeness(std::uint64_t seed, double scale) {
  Outcome o;
  auto t = small_theory("sort S\nrel P : S\nrel Q : S\nconst c : S\n");
  const char* unprovable[] = {
      "true |- [] or(P(c), imp(P(c), false))",
      "imp(imp(P(c), Q(c)), P(c)) |- [] P(c)",
      "true |- [] imp(imp(imp(P(c), Q(c)), P(c)), P(c))",
  };
  for (auto text : unprovable) {
    auto s = parse_sequent(text, t.sig);
    ++o.checked;
    auto r = provable_ik(t, s);
    if (r.provable) fail(o, std::string("proved ") + text);
    else if (!certificate_refutes(r, s)) fail(o, std::string("certificate fails for ") + text);
  }

  Rng rng(seed);
  FormulaGenOptions shape{3, 2, 1, true, true, true, false};
  const char* sigs[] = {
      "sort S\nrel P : S\nrel A\nconst c : S\nconst d : S\n",
      "sort S\nrel P : S\nconst c : S\n",
      "sort S\nrel A\nrel B\nconst c : S\n",
  };
  std::size_t cells = 0;
  for (std::size_t i = 0, n = scaled(150, scale); i < n; ++i) {
    auto u = small_theory(sigs[i % 3]);
    auto phi = random_formula(rng, u.sig, {}, shape);
    ++o.checked;
    try {
      auto m = morleyize(u, {phi});
      auto c = hintikka_model(m);
      auto k = kripke_from_herbrand(c.base, c.worlds, m.theory.sig);
      for (std::size_t f = 0; f < m.fragment.size(); ++f)
        for (std::size_t w = 0; w < k.worlds.size(); ++w)
          for (const auto& env : environments(k, w, m.args[f])) {
            ++cells;
            if (force(k, w, env, m.fragment[f]) != force(k, w, env, m.atom_for(f)))
              fail(o, "fresh atom disagrees with forcing for " + print(m.fragment[f]));
          }
    } catch (const std::exception& e) {
      fail(o, print(phi) + ": " + e.what());
    }
  }
  return finish(o, "excluded middle and Peirce refuted with certificates; " +
                       std::to_string(cells) + " fragment cells agree");
}

// Formulas provable in the empty theory, built from small templates.
Formula valid_template(Rng& rng, const Formula& a, const Formula& b) {
  switch (uniform(rng, 0, 5)) {
    case 0: return make_imp(a, a);
    case 1: return make_imp(make_and({a, b}), b);
    case 2: return make_imp(a, make_or({b, a}));
    case 3: return make_imp(a, make_imp(b, a));
    case 4: return make_imp(a, make_imp(make_imp(a, make_bottom()), make_bottom()));
    default: return make_imp(make_and({a, make_imp(a, b)}), b);
  }
}

Outcome disjunction_existence(std::uint64_t seed, double scale) {
  Rng rng(seed);
  auto t = small_theory("sort S\nrel P : S\nrel Q : S\nrel A\nconst c : S\n");
  FormulaGenOptions shape{1, 2, 1, true, false, false, false};
  Context x{Var{"x", "S"}};
  Outcome o;
  const std::size_t target = scaled(500, scale);
  std::size_t disjunctions = 0, existentials = 0, attempts = 0;
  while ((disjunctions < target || existentials < target) && attempts < 40 * target) {
    ++attempts;
    bool want_or = disjunctions < target && (existentials >= target || attempts % 2);
    try {
      if (want_or) {
        std::vector<Formula> kids;
        std::size_t width = uniform(rng, 2, 3);
        for (std::size_t k = 0; k < width; ++k) {
          auto a = random_formula(rng, t.sig, {}, shape), b = random_formula(rng, t.sig, {}, shape);
          kids.push_back(coin(rng, 0.3) ? valid_template(rng, a, b) : a);
        }
        auto w = disjunction_property(t, kids);
        if (!w.premise) continue;
        ++disjunctions;
        ++o.checked;
        if (!w.index) fail(o, "no disjunct of " + print(make_or(kids)));
        else if (!provable_ik(t, Sequent{make_top(), {}, kids[*w.index]}).provable)
          fail(o, "witness not provable: " + print(kids[*w.index]));
      } else {
        auto a = random_formula(rng, t.sig, x, shape), b = random_formula(rng, t.sig, x, shape);
        auto body = coin(rng, 0.5) ? valid_template(rng, a, b) : a;
        auto ex = make_exists(x, body);
        auto w = existence_property(t, ex);
        if (!w.premise) continue;
        ++existentials;
        ++o.checked;
        if (!w.terms) fail(o, "no instance of " + print(ex));
      }
    } catch (const std::exception& e) {
      fail(o, e.what());
    }
  }
  if (disjunctions < target || existentials < target)
    fail(o, "generated only " + std::to_string(disjunctions) + " disjunctions and " +
                std::to_string(existentials) + " existentials");
  return finish(o, std::to_string(disjunctions) + " disjunctions, " +
                       std::to_string(existentials) + " existentials, all witnessed");
}

}  // namespace

const std::vector<Property>& properties() {
  static const std::vector<Property> all{
      {"soundness", "every rule instance is sound in random Kripke models", soundness},
      {"distributive-axiom", "the distributive axiom is forced at every world", distributive_axiom},
      {"distributive-law", "derived distributive laws pass the checker", distributive_law},
      {"filter-lemma", "construct_filter finds separating prime filters", filter_lemma},
      {"duality", "lattice and poset round trips through the spectrum", duality},
      {"tree-distributivity", "tree-distributivity agrees with distributivity", tree_distributivity},
      {"coherent-completeness", "entails and countermodel agree on random theories",
       coherent_theories},
      {"kripke-completeness", "refutations carry certificates; fresh atoms match forcing",
       kripke_completeness},
      {"disjunction-existence", "provable disjunctions and existentials have witnesses",
       disjunction_existence},
  };
  return all;
}

}  // namespace ik::suite
