#pragma once

#include <vector>

#include "ik/calculus.hpp"
#include "ik/random.hpp"

namespace ik {

/// One application of a rule, as check_rule_instance sees it.
struct RuleInstance {
  Rule rule = Rule::Identity;
  Payload payload;
  std::vector<Sequent> premises;
  Sequent conclusion;
};

struct InstanceGenOptions {
  std::size_t max_width = 3;    // conjunction/disjunction families, tree branching
  std::size_t max_block = 2;    // quantifier blocks, equality tuples
  std::size_t max_height = 2;   // tree rules
  std::size_t max_context = 2;
  FormulaGenOptions formula{2, 2, 1, true, true, true, true};
};

/// Random instance of `rule` over `sig` that passes check_rule_instance.
/// Theory-axiom instances have no premises; their soundness is relative to
/// models of the axiom.
RuleInstance random_instance(Rng& rng, const Signature& sig, Rule rule,
                             const InstanceGenOptions& opts = {});

}  // namespace ik
