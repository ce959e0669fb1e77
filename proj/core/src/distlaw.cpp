#include <stdexcept>

#include "ik/calculus.hpp"

namespace ik {

namespace {

// Small proof-building kit over a fixed context.
struct Builder {
  Context ctx;

  DerivationPtr node(Rule r, Payload p, std::vector<DerivationPtr> prems, Formula ante,
                     Formula succ) const {
    auto d = std::make_shared<Derivation>();
    d->conclusion = Sequent{std::move(ante), ctx, std::move(succ)};
    d->rule = r;
    d->payload = std::move(p);
    d->premises = std::move(prems);
    return d;
  }

  static const Formula& ante(const DerivationPtr& d) { return d->conclusion.antecedent; }
  static const Formula& succ(const DerivationPtr& d) { return d->conclusion.succedent; }

  DerivationPtr conj_elim(const Formula& conj, std::size_t j) const {
    Payload p;
    p.index = j;
    return node(Rule::ConjElim, p, {}, conj, conj->kids.at(j));
  }

  DerivationPtr disj_intro(const Formula& disj, std::size_t j) const {
    Payload p;
    p.index = j;
    return node(Rule::DisjIntro, p, {}, disj->kids.at(j), disj);
  }

  DerivationPtr cut(const DerivationPtr& a, const DerivationPtr& b) const {
    return node(Rule::Cut, {}, {a, b}, ante(a), succ(b));
  }

  DerivationPtr conj_intro(const Formula& antecedent, std::vector<DerivationPtr> prems) const {
    std::vector<Formula> kids;
    for (const auto& d : prems) kids.push_back(succ(d));
    return node(Rule::ConjIntro, {}, std::move(prems), antecedent, make_and(std::move(kids)));
  }

  DerivationPtr disj_elim(std::vector<DerivationPtr> prems, const Formula& succedent) const {
    std::vector<Formula> kids;
    for (const auto& d : prems) kids.push_back(ante(d));
    return node(Rule::DisjElim, {}, std::move(prems), make_or(std::move(kids)), succedent);
  }

  // and(a, b) |- c  becomes  a |- imp(b, c)
  DerivationPtr imp_intro(const DerivationPtr& d) const {
    const auto& conj = ante(d);
    return node(Rule::ImpIntro, {}, {d}, conj->kids[0], make_imp(conj->kids[1], succ(d)));
  }

  // a |- imp(b, c)  becomes  and(a, b) |- c
  DerivationPtr imp_elim(const DerivationPtr& d) const {
    const auto& imp = succ(d);
    return node(Rule::ImpElim, {}, {d}, make_and({ante(d), imp->kids[0]}), imp->kids[1]);
  }
};

// and(or(phi, psi_k), or(phi, and(rest))) |- or(phi, and(psi_k, rest...))
DerivationPtr distribute_step(const Builder& b, const Formula& phi, const Formula& psi_k,
                              const std::vector<Formula>& rest) {
  auto x = make_or({phi, psi_k});
  auto rest_conj = make_and(rest);
  auto y = make_or({phi, rest_conj});
  std::vector<Formula> all{psi_k};
  all.insert(all.end(), rest.begin(), rest.end());
  auto a = make_and(all);
  auto goal = make_or({phi, a});

  // phi |- imp(y, goal)
  auto phi_y = make_and({phi, y});
  auto from_phi = b.imp_intro(b.cut(b.conj_elim(phi_y, 0), b.disj_intro(goal, 0)));

  // y |- imp(psi_k, goal), by cases on y
  auto phi_psi = make_and({phi, psi_k});
  auto case_phi = b.imp_intro(b.cut(b.conj_elim(phi_psi, 0), b.disj_intro(goal, 0)));
  auto rest_psi = make_and({rest_conj, psi_k});
  std::vector<DerivationPtr> parts{b.conj_elim(rest_psi, 1)};
  for (std::size_t i = 0; i < rest.size(); ++i)
    parts.push_back(b.cut(b.conj_elim(rest_psi, 0), b.conj_elim(rest_conj, i)));
  auto case_rest =
      b.imp_intro(b.cut(b.conj_intro(rest_psi, std::move(parts)), b.disj_intro(goal, 1)));
  auto y_imp = b.disj_elim({case_phi, case_rest}, make_imp(psi_k, goal));

  // psi_k |- imp(y, goal): swap the conjunction, then eliminate
  auto psi_y = make_and({psi_k, y});
  auto swap = b.conj_intro(psi_y, {b.conj_elim(psi_y, 1), b.conj_elim(psi_y, 0)});
  auto from_psi = b.imp_intro(b.cut(swap, b.imp_elim(y_imp)));

  auto x_imp = b.disj_elim({from_phi, from_psi}, make_imp(y, goal));
  return b.imp_elim(x_imp);
}

}  // namespace

DerivationPtr derive_distributive_law(const Formula& phi, const std::vector<Formula>& psis,
                                      const Signature* sig) {
  const std::size_t g = psis.size();
  if (g == 0) throw std::invalid_argument("distributive law needs at least one psi");
  if (sig && (g > sig->conn_bound || g > sig->arity_bound))
    throw std::invalid_argument("width " + std::to_string(g) + " exceeds the signature bounds");

  VarSet fv = free_vars(phi);
  for (const auto& p : psis) {
    auto more = free_vars(p);
    fv.insert(more.begin(), more.end());
  }
  Builder b{Context(fv.begin(), fv.end())};

  // Spine 1^k carries or(phi, and(psi_k..)), its left child or(phi, psi_k).
  auto spine = [&](std::size_t k) {
    return make_or({phi, make_and(std::vector<Formula>(psis.begin() + k, psis.end()))});
  };
  std::vector<Formula> left;
  for (const auto& p : psis) left.push_back(make_or({phi, p}));

  TreeFamily t;
  t.gamma = 2;
  t.height = g;
  std::map<Address, DerivationPtr> prem;
  for (const auto& a : tree_addresses(2, g)) {
    std::size_t ones = 0;
    while (ones < a.size() && a[ones] == 1) ++ones;
    Formula lab = ones == a.size() ? spine(ones) : left[ones];
    t.label[a] = lab;
    if (a.size() == g) continue;
    if (ones == a.size()) {
      std::vector<Formula> rest(psis.begin() + ones + 1, psis.end());
      prem[a] = distribute_step(b, phi, psis[ones], rest);
    } else {
      prem[a] = b.conj_elim(make_and({lab, lab}), 0);
    }
  }
  Bar bar;
  for (std::size_t k = 0; k < g; ++k) {
    Address f(k, 1);
    f.push_back(0);
    bar.nodes.push_back(f);
  }
  bar.nodes.push_back(Address(g, 1));

  std::vector<DerivationPtr> dd_prems;
  for (const auto& a : tree_addresses(2, g))
    if (a.size() < g) dd_prems.push_back(prem.at(a));
  auto dd_seq = dual_dist_conclusion(t, bar, b.ctx);
  Payload dd_payload;
  dd_payload.tree = t;
  dd_payload.bar = bar;
  auto dd = b.node(Rule::DualDist, dd_payload, std::move(dd_prems), dd_seq.antecedent,
                   dd_seq.succedent);

  // law antecedent |- each clause of the dual-dist antecedent
  auto law = make_and(left);
  std::vector<DerivationPtr> clauses;
  for (std::size_t k = 0; k <= g; ++k) {
    const auto& clause = dd_seq.antecedent->kids[k];
    if (k < g) {
      clauses.push_back(b.cut(b.conj_elim(law, k), b.disj_intro(clause, k)));
    } else {
      auto top = b.conj_intro(law, {});
      auto last = b.cut(b.disj_intro(spine(g), 1), b.disj_intro(clause, g - 1));
      clauses.push_back(b.cut(top, last));
    }
  }
  return b.cut(b.conj_intro(law, std::move(clauses)), dd);
}

}  // namespace ik
