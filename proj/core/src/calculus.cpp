#include "ik/calculus.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace ik {

std::string print_address(const Address& a) {
  std::string s = "<";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ">";
}

bool is_prefix(const Address& a, const Address& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::vector<Address> tree_addresses(std::size_t gamma, std::size_t height) {
  std::vector<Address> out{Address{}};
  std::size_t level_start = 0;
  for (std::size_t len = 1; len <= height; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (std::size_t b = 0; b < gamma; ++b) {
        Address child = out[i];
        child.push_back(b);
        out.push_back(std::move(child));
      }
    level_start = level_end;
  }
  return out;
}

Verdict check_bar(std::size_t gamma, std::size_t height, const Bar& bar) {
  for (const auto& a : bar.nodes) {
    if (a.size() > height)
      throw std::out_of_range("address " + print_address(a) + " deeper than height " +
                              std::to_string(height));
    for (auto b : a)
      if (b >= gamma)
        throw std::out_of_range("address " + print_address(a) + " exceeds branching " +
                                std::to_string(gamma));
  }
  for (std::size_t i = 0; i < bar.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < bar.nodes.size(); ++j) {
      const auto& a = bar.nodes[i];
      const auto& b = bar.nodes[j];
      if (is_prefix(a, b) || is_prefix(b, a))
        return Verdict::reject("bar is not an antichain: " + print_address(a) + " and " +
                               print_address(b) + " are comparable");
    }
  for (const auto& leaf : tree_addresses(gamma, height)) {
    if (leaf.size() != height) continue;
    bool met = std::any_of(bar.nodes.begin(), bar.nodes.end(),
                           [&](const Address& a) { return is_prefix(a, leaf); });
    if (!met) return Verdict::reject("branch through " + print_address(leaf) + " misses the bar");
  }
  return Verdict::accept();
}

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, kRuleCount> kRuleNames{{
    {Rule::Identity, "identity"},
    {Rule::Substitution, "substitution"},
    {Rule::Cut, "cut"},
    {Rule::EqRefl, "eq-refl"},
    {Rule::EqSubst, "eq-subst"},
    {Rule::ConjElim, "conj-elim"},
    {Rule::ConjIntro, "conj-intro"},
    {Rule::DisjIntro, "disj-intro"},
    {Rule::DisjElim, "disj-elim"},
    {Rule::ImpIntro, "imp-intro"},
    {Rule::ImpElim, "imp-elim"},
    {Rule::ExIntro, "ex-intro"},
    {Rule::ExElim, "ex-elim"},
    {Rule::AllIntro, "all-intro"},
    {Rule::AllElim, "all-elim"},
    {Rule::DualDist, "dual-dist"},
    {Rule::TransTrans, "trans-trans"},
    {Rule::TheoryAxiom, "theory-axiom"},
}};

}  // namespace

std::string rule_name(Rule r) {
  for (const auto& [rule, name] : kRuleNames)
    if (rule == r) return std::string(name);
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (const auto& [rule, n] : kRuleNames)
    if (n == name) return rule;
  return std::nullopt;
}

std::vector<Rule> all_rules() {
  std::vector<Rule> out;
  for (const auto& entry : kRuleNames) out.push_back(entry.first);
  return out;
}

// ---------------------------------------------------------------- tree rules

namespace {

const Formula& label_at(const TreeFamily& t, const Address& a) {
  auto it = t.label.find(a);
  if (it == t.label.end()) throw std::invalid_argument("no label at " + print_address(a));
  return it->second;
}

const Context& entry_at(const std::map<Address, Context>& m, const Address& a, const char* what) {
  auto it = m.find(a);
  if (it == m.end())
    throw std::invalid_argument(std::string("no ") + what + " at " + print_address(a));
  return it->second;
}

std::vector<Address> children(const TreeFamily& t, const Address& f) {
  std::vector<Address> out;
  for (std::size_t b = 0; b < t.gamma; ++b) {
    Address g = f;
    g.push_back(b);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<Sequent> dual_dist_premises(const TreeFamily& t, const Context& ctx) {
  std::vector<Sequent> out;
  for (const auto& f : tree_addresses(t.gamma, t.height)) {
    if (f.size() == t.height) break;
    std::vector<Formula> kids;
    for (const auto& g : children(t, f)) kids.push_back(label_at(t, g));
    out.push_back(Sequent{make_and(std::move(kids)), ctx, label_at(t, f)});
  }
  return out;
}

Sequent dual_dist_conclusion(const TreeFamily& t, const Bar& bar, const Context& ctx) {
  std::vector<Formula> clauses;
  for (const auto& f : bar.nodes) {
    std::vector<Formula> path;
    for (std::size_t b = 1; b <= f.size(); ++b)
      path.push_back(label_at(t, Address(f.begin(), f.begin() + b)));
    clauses.push_back(make_or(std::move(path)));
  }
  return Sequent{make_and(std::move(clauses)), ctx, label_at(t, Address{})};
}

std::vector<Sequent> trans_trans_premises(const TreeFamily& t) {
  std::vector<Sequent> out;
  for (const auto& f : tree_addresses(t.gamma, t.height)) {
    if (f.size() == t.height) break;
    std::vector<Formula> alts;
    for (const auto& g : children(t, f))
      alts.push_back(make_exists(entry_at(t.blocks, g, "block"), label_at(t, g)));
    out.push_back(Sequent{label_at(t, f), entry_at(t.contexts, f, "context"),
                          make_or(std::move(alts))});
  }
  return out;
}

Sequent trans_trans_conclusion(const TreeFamily& t, const Bar& bar) {
  std::vector<Formula> alts;
  for (const auto& f : bar.nodes) {
    std::vector<Var> block;
    std::vector<Formula> path;
    for (std::size_t b = 1; b <= f.size(); ++b) {
      Address g(f.begin(), f.begin() + b);
      const auto& x = entry_at(t.blocks, g, "block");
      block.insert(block.end(), x.begin(), x.end());
      path.push_back(label_at(t, g));
    }
    alts.push_back(make_exists(std::move(block), make_and(std::move(path))));
  }
  return Sequent{label_at(t, Address{}), entry_at(t.contexts, Address{}, "context"),
                 make_or(std::move(alts))};
}

// ---------------------------------------------------------------- rule instances

namespace {

struct Reject {
  std::string why;
};

void need(bool cond, const std::string& why) {
  if (!cond) throw Reject{why};
}

void well_formed(const Sequent& s, const std::string& which) {
  std::set<std::string> names;
  for (const auto& v : s.context)
    need(names.insert(v.name).second, which + ": variable '" + v.name + "' repeated in context");
  VarSet ctx(s.context.begin(), s.context.end());
  for (const auto& side : {s.antecedent, s.succedent}) {
    need(side != nullptr, which + ": missing formula");
    for (const auto& v : free_vars(side))
      need(ctx.count(v) > 0, which + ": free variable '" + v.name + "' not in context");
  }
}

// Members of a conjunction or disjunction, with true/false read as empty families.
std::optional<std::vector<Formula>> family(const Formula& f, Conn c) {
  if (f->conn == c) return f->kids;
  if ((c == Conn::And && f->conn == Conn::Top) || (c == Conn::Or && f->conn == Conn::Bottom))
    return std::vector<Formula>{};
  return std::nullopt;
}

// Quantifier block and body; a formula without the quantifier has an empty block.
std::pair<Context, Formula> quantified(const Formula& f, Conn q) {
  if (f->conn == q) return {f->block, f->kids[0]};
  return {Context{}, f};
}

void same_formula(const Formula& a, const Formula& b, const std::string& what) {
  need(schema_equal(a, b), what + ": expected " + print(b) + ", found " + print(a));
}

void same_context(const Context& a, const Context& b, const std::string& what) {
  need(a == b, what + ": context " + print_context(a) + " differs from " + print_context(b));
}

void premise_count(const std::vector<Sequent>& ps, std::size_t n) {
  need(ps.size() == n, "expected " + std::to_string(n) + " premise(s), found " +
                           std::to_string(ps.size()));
}

Context concat(Context a, const Context& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool disjoint(const Context& block, const VarSet& fv) {
  return std::none_of(block.begin(), block.end(), [&](const Var& v) { return fv.count(v); });
}

std::string names_of(const Context& c) { return print_context(c); }

void check_substitution(const Payload& p, const std::vector<Sequent>& ps, const Sequent& c) {
  premise_count(ps, 1);
  const auto& prem = ps[0];
  need(p.terms.size() == prem.context.size(),
       "substitution needs one term per premise context variable");
  need(p.target == c.context, "substitution target context differs from conclusion context");
  Substitution sub;
  VarSet target(p.target.begin(), p.target.end());
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    need(p.terms[i] != nullptr, "substitution term missing");
    need(sort_of(p.terms[i]) == prem.context[i].sort,
         "substitution term " + print_term(p.terms[i]) + " has the wrong sort");
    VarSet vs;
    term_vars(p.terms[i], vs);
    for (const auto& v : vs)
      need(target.count(v) > 0, "variable '" + v.name + "' of term " + print_term(p.terms[i]) +
                                    " missing from target context");
    sub[prem.context[i]] = p.terms[i];
  }
  same_formula(c.antecedent, substitute(prem.antecedent, sub), "substituted antecedent");
  same_formula(c.succedent, substitute(prem.succedent, sub), "substituted succedent");
}

void check_eq_subst(const Payload& p, const std::vector<Sequent>& ps, const Sequent& c) {
  premise_count(ps, 0);
  need(p.phi != nullptr, "eq-subst payload lacks phi");
  need(p.eq_x.size() == p.eq_y.size() && p.eq_x.size() == p.eq_w.size(),
       "eq-subst contexts x, y, w differ in length");
  Substitution to_x, to_y;
  std::vector<Formula> conj;
  for (std::size_t i = 0; i < p.eq_x.size(); ++i) {
    need(p.eq_x[i].sort == p.eq_y[i].sort && p.eq_x[i].sort == p.eq_w[i].sort,
         "eq-subst contexts x, y, w differ in type at position " + std::to_string(i));
    conj.push_back(make_eq(make_var(p.eq_x[i]), make_var(p.eq_y[i])));
    to_x[p.eq_w[i]] = make_var(p.eq_x[i]);
    to_y[p.eq_w[i]] = make_var(p.eq_y[i]);
  }
  VarSet z(c.context.begin(), c.context.end());
  for (const auto& v : concat(p.eq_x, p.eq_y))
    need(z.count(v) > 0, "eq-subst context lacks '" + v.name + "'");
  conj.push_back(substitute(p.phi, to_x));
  same_formula(c.antecedent, make_and(std::move(conj)), "eq-subst antecedent");
  same_formula(c.succedent, substitute(p.phi, to_y), "eq-subst succedent");
}

void check_tree_shape(const Payload& p) {
  need(p.tree.has_value() && p.bar.has_value(), "tree rule payload lacks tree or bar");
  need(p.limits.empty(), "limit-level premises must be empty at finite height");
  const auto& t = *p.tree;
  need(t.gamma >= 1, "branching must be positive");
  need(t.height >= 1, "height must be positive");
  for (const auto& a : tree_addresses(t.gamma, t.height))
    need(t.label.count(a) > 0, "no label at " + print_address(a));
  for (const auto& [a, _] : t.label)
    need(a.size() <= t.height &&
             std::all_of(a.begin(), a.end(), [&](std::size_t b) { return b < t.gamma; }),
         "label at " + print_address(a) + " lies outside the tree");
  Verdict bv;
  try {
    bv = check_bar(t.gamma, t.height, *p.bar);
  } catch (const std::out_of_range& e) {
    throw Reject{std::string("bad bar: ") + e.what()};
  }
  need(bv.ok, bv.reason);
}

void match_premises(const std::vector<Sequent>& expected, const std::vector<Sequent>& ps,
                    const std::vector<Address>& nodes) {
  premise_count(ps, expected.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string where = "premise for node " + print_address(nodes[i]);
    same_context(ps[i].context, expected[i].context, where);
    same_formula(ps[i].antecedent, expected[i].antecedent, where + " antecedent");
    same_formula(ps[i].succedent, expected[i].succedent, where + " succedent");
  }
}

std::vector<Address> inner_nodes(const TreeFamily& t) {
  std::vector<Address> out;
  for (const auto& a : tree_addresses(t.gamma, t.height))
    if (a.size() < t.height) out.push_back(a);
  return out;
}

void check_dual_dist(const Payload& p, const std::vector<Sequent>& ps, const Sequent& c) {
  check_tree_shape(p);
  const auto& t = *p.tree;
  match_premises(dual_dist_premises(t, c.context), ps, inner_nodes(t));
  auto expected = dual_dist_conclusion(t, *p.bar, c.context);
  same_formula(c.antecedent, expected.antecedent, "dual-dist conclusion antecedent");
  same_formula(c.succedent, expected.succedent, "dual-dist conclusion succedent");
}

void check_trans_trans(const Payload& p, const std::vector<Sequent>& ps, const Sequent& c) {
  check_tree_shape(p);
  const auto& t = *p.tree;
  for (const auto& f : tree_addresses(t.gamma, t.height)) {
    const auto fv = free_vars(label_at(t, f));
    if (f.size() < t.height) {
      need(t.contexts.count(f) > 0, "no context at " + print_address(f));
      const auto& y = t.contexts.at(f);
      VarSet ys(y.begin(), y.end());
      need(ys.size() == y.size() && ys == fv,
           "context at " + print_address(f) + " is not the canonical context of its label");
    }
    if (f.empty()) continue;
    need(t.blocks.count(f) > 0, "no block at " + print_address(f));
    const auto& x = t.blocks.at(f);
    Address parent(f.begin(), f.end() - 1);
    const auto parent_fv = free_vars(label_at(t, parent));
    need(disjoint(x, parent_fv), "side condition: block " + names_of(x) + " at " +
                                     print_address(f) + " meets FV of the label at " +
                                     print_address(parent));
    VarSet expected = parent_fv;
    expected.insert(x.begin(), x.end());
    need(fv == expected, "side condition: FV of the label at " + print_address(f) +
                             " is not FV of its parent plus its block");
  }
  match_premises(trans_trans_premises(t), ps, inner_nodes(t));
  auto expected = trans_trans_conclusion(t, *p.bar);
  same_context(c.context, expected.context, "trans-trans conclusion");
  same_formula(c.antecedent, expected.antecedent, "trans-trans conclusion antecedent");
  same_formula(c.succedent, expected.succedent, "trans-trans conclusion succedent");
}

void check_instance(Rule rule, const Payload& p, const std::vector<Sequent>& ps,
                    const Sequent& c) {
  for (std::size_t i = 0; i < ps.size(); ++i) well_formed(ps[i], "premise " + std::to_string(i));
  well_formed(c, "conclusion");

  switch (rule) {
    case Rule::Identity:
      premise_count(ps, 0);
      same_formula(c.succedent, c.antecedent, "identity");
      return;
    case Rule::Substitution:
      check_substitution(p, ps, c);
      return;
    case Rule::Cut:
      premise_count(ps, 2);
      same_context(ps[0].context, c.context, "cut left premise");
      same_context(ps[1].context, c.context, "cut right premise");
      same_formula(ps[0].antecedent, c.antecedent, "cut left antecedent");
      same_formula(ps[1].antecedent, ps[0].succedent, "cut formula");
      same_formula(ps[1].succedent, c.succedent, "cut right succedent");
      return;
    case Rule::EqRefl: {
      premise_count(ps, 0);
      need(c.context.size() == 1, "eq-refl context must be a single variable");
      same_formula(c.antecedent, make_top(), "eq-refl antecedent");
      auto x = make_var(c.context[0]);
      same_formula(c.succedent, make_eq(x, x), "eq-refl succedent");
      return;
    }
    case Rule::EqSubst:
      check_eq_subst(p, ps, c);
      return;
    case Rule::ConjElim: {
      premise_count(ps, 0);
      auto kids = family(c.antecedent, Conn::And);
      need(kids.has_value(), "conj-elim antecedent is not a conjunction");
      need(p.index.has_value() && *p.index < kids->size(), "conj-elim index out of range");
      same_formula(c.succedent, (*kids)[*p.index], "conj-elim succedent");
      return;
    }
    case Rule::DisjIntro: {
      premise_count(ps, 0);
      auto kids = family(c.succedent, Conn::Or);
      need(kids.has_value(), "disj-intro succedent is not a disjunction");
      need(p.index.has_value() && *p.index < kids->size(), "disj-intro index out of range");
      same_formula(c.antecedent, (*kids)[*p.index], "disj-intro antecedent");
      return;
    }
    case Rule::ConjIntro: {
      auto kids = family(c.succedent, Conn::And);
      need(kids.has_value(), "conj-intro succedent is not a conjunction");
      premise_count(ps, kids->size());
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto where = "conj-intro premise " + std::to_string(i);
        same_context(ps[i].context, c.context, where);
        same_formula(ps[i].antecedent, c.antecedent, where);
        same_formula(ps[i].succedent, (*kids)[i], where);
      }
      return;
    }
    case Rule::DisjElim: {
      auto kids = family(c.antecedent, Conn::Or);
      need(kids.has_value(), "disj-elim antecedent is not a disjunction");
      premise_count(ps, kids->size());
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto where = "disj-elim premise " + std::to_string(i);
        same_context(ps[i].context, c.context, where);
        same_formula(ps[i].antecedent, (*kids)[i], where);
        same_formula(ps[i].succedent, c.succedent, where);
      }
      return;
    }
    case Rule::ImpIntro:
    case Rule::ImpElim: {
      premise_count(ps, 1);
      // Lower sequent phi |- psi -> eta, upper sequent phi & psi |- eta.
      const Sequent& upper = rule == Rule::ImpIntro ? ps[0] : c;
      const Sequent& lower = rule == Rule::ImpIntro ? c : ps[0];
      same_context(upper.context, lower.context, rule_name(rule));
      need(upper.antecedent->conn == Conn::And && upper.antecedent->kids.size() == 2,
           "implication rule needs a binary conjunction above the line");
      need(lower.succedent->conn == Conn::Implies,
           "implication rule needs an implication below the line");
      same_formula(lower.antecedent, upper.antecedent->kids[0], "implication rule left conjunct");
      same_formula(lower.succedent->kids[0], upper.antecedent->kids[1],
                   "implication rule right conjunct");
      same_formula(lower.succedent->kids[1], upper.succedent, "implication rule consequent");
      return;
    }
    case Rule::ExElim:
    case Rule::ExIntro: {
      premise_count(ps, 1);
      // Upper phi |-_{xy} psi, lower ex y. phi |-_x psi.
      const Sequent& upper = rule == Rule::ExElim ? ps[0] : c;
      const Sequent& lower = rule == Rule::ExElim ? c : ps[0];
      auto [y, body] = quantified(lower.antecedent, Conn::Exists);
      same_context(upper.context, concat(lower.context, y), rule_name(rule));
      need(disjoint(y, free_vars(lower.succedent)),
           "side condition: a variable of " + names_of(y) + " is free in the succedent");
      same_formula(upper.antecedent, body, "existential rule body");
      same_formula(upper.succedent, lower.succedent, "existential rule succedent");
      return;
    }
    case Rule::AllIntro:
    case Rule::AllElim: {
      premise_count(ps, 1);
      const Sequent& upper = rule == Rule::AllIntro ? ps[0] : c;
      const Sequent& lower = rule == Rule::AllIntro ? c : ps[0];
      auto [y, body] = quantified(lower.succedent, Conn::Forall);
      same_context(upper.context, concat(lower.context, y), rule_name(rule));
      need(disjoint(y, free_vars(lower.antecedent)),
           "side condition: a variable of " + names_of(y) + " is free in the antecedent");
      same_formula(upper.antecedent, lower.antecedent, "universal rule antecedent");
      same_formula(upper.succedent, body, "universal rule body");
      return;
    }
    case Rule::DualDist:
      check_dual_dist(p, ps, c);
      return;
    case Rule::TransTrans:
      check_trans_trans(p, ps, c);
      return;
    case Rule::TheoryAxiom:
      premise_count(ps, 0);
      return;
  }
}

}  // namespace

Verdict check_rule_instance(Rule rule, const Payload& payload,
                            const std::vector<Sequent>& premises, const Sequent& conclusion) {
  try {
    check_instance(rule, payload, premises, conclusion);
  } catch (const Reject& r) {
    return Verdict::reject(rule_name(rule) + ": " + r.why);
  } catch (const std::invalid_argument& e) {
    return Verdict::reject(rule_name(rule) + ": malformed payload: " + e.what());
  }
  return Verdict::accept();
}

namespace {

Verdict check_node(const Derivation& d, const Theory& theory, const Signature* sig,
                   std::vector<std::size_t>& path) {
  Verdict v;
  if (sig) {
    try {
      check_sequent(*sig, d.conclusion);
    } catch (const SortError& e) {
      v = Verdict::reject(std::string("ill-sorted conclusion: ") + e.what());
    }
  }
  if (v.ok) {
    std::vector<Sequent> ps;
    for (const auto& p : d.premises) ps.push_back(p->conclusion);
    v = check_rule_instance(d.rule, d.payload, ps, d.conclusion);
  }
  if (v.ok && d.rule == Rule::TheoryAxiom) {
    bool found = false;
    for (const auto& ax : theory) {
      if (!d.payload.axiom.empty() && ax.name != d.payload.axiom) continue;
      if (schema_equal(ax.sequent, d.conclusion)) {
        found = true;
        break;
      }
    }
    if (!found)
      v = Verdict::reject(
          d.payload.axiom.empty()
              ? "theory-axiom: " + print(d.conclusion) + " is not an axiom of the theory"
              : "theory-axiom: no axiom named '" + d.payload.axiom + "' with this conclusion");
  }
  if (!v.ok) {
    v.path = path;
    return v;
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(i);
    auto sub = check_node(*d.premises[i], theory, sig, path);
    path.pop_back();
    if (!sub.ok) return sub;
  }
  return v;
}

}  // namespace

Verdict check_derivation(const Derivation& d, const Theory& theory, const Signature* sig) {
  std::vector<std::size_t> path;
  return check_node(d, theory, sig, path);
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(*p);
  return n;
}

}  // namespace ik
