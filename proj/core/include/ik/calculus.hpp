#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ik/syntax.hpp"
#include "ik/verdict.hpp"

namespace ik {

/// Node address in the gamma-branching tree; the root is the empty sequence.
using Address = std::vector<std::size_t>;

std::string print_address(const Address& a);
bool is_prefix(const Address& a, const Address& b);

/// All addresses of length <= height, shortest first, lexicographic within a level.
std::vector<Address> tree_addresses(std::size_t gamma, std::size_t height);

/// A set of nodes: a candidate bar. Order is significant for the conclusions
/// of the tree rules.
struct Bar {
  std::vector<Address> nodes;
};

Verdict check_bar(std::size_t gamma, std::size_t height, const Bar& bar);

/// Labelled tree for the dual distributivity and transfinite transitivity
/// rules. `contexts` and `blocks` are only used by the latter.
struct TreeFamily {
  std::size_t gamma = 0;
  std::size_t height = 0;
  std::map<Address, Formula> label;
  std::map<Address, Context> contexts;
  std::map<Address, Context> blocks;
};

enum class Rule {
  Identity,
  Substitution,
  Cut,
  EqRefl,
  EqSubst,
  ConjElim,
  ConjIntro,
  DisjIntro,
  DisjElim,
  ImpIntro,
  ImpElim,
  ExIntro,
  ExElim,
  AllIntro,
  AllElim,
  DualDist,
  TransTrans,
  TheoryAxiom,
};

inline constexpr std::size_t kRuleCount = 18;

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);
std::vector<Rule> all_rules();

struct Payload {
  std::optional<std::size_t> index;  // conj-elim, disj-intro
  std::vector<Term> terms;           // substitution: one term per premise context variable
  Context target;                    // substitution: conclusion context
  Context eq_x, eq_y, eq_w;          // eq-subst
  Formula phi;                       // eq-subst body
  std::optional<TreeFamily> tree;    // dual-dist, trans-trans
  std::optional<Bar> bar;
  std::vector<Formula> limits;       // limit-level premises; always empty at finite height
  std::string axiom;                 // theory-axiom: optional name
};

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  Sequent conclusion;
  Rule rule = Rule::Identity;
  Payload payload;
  std::vector<DerivationPtr> premises;
};

struct NamedSequent {
  std::string name;
  Sequent sequent;
};

using Theory = std::vector<NamedSequent>;

/// The premises a tree rule demands, in the order check_rule_instance expects
/// them: one per node above the last level, shortest address first.
std::vector<Sequent> dual_dist_premises(const TreeFamily& t, const Context& ctx);
Sequent dual_dist_conclusion(const TreeFamily& t, const Bar& bar, const Context& ctx);
std::vector<Sequent> trans_trans_premises(const TreeFamily& t);
Sequent trans_trans_conclusion(const TreeFamily& t, const Bar& bar);

/// Local check of one rule application. Theory membership of axiom leaves is
/// checked by check_derivation.
Verdict check_rule_instance(Rule rule, const Payload& payload,
                            const std::vector<Sequent>& premises, const Sequent& conclusion);

Verdict check_derivation(const Derivation& d, const Theory& theory,
                         const Signature* sig = nullptr);

/// Derivation of and_i or(phi, psi_i) |- or(phi, and_i psi_i) that goes
/// through a dual-dist step. The context is the union of the free variables.
DerivationPtr derive_distributive_law(const Formula& phi, const std::vector<Formula>& psis,
                                      const Signature* sig = nullptr);

std::size_t derivation_size(const Derivation& d);

}  // namespace ik
