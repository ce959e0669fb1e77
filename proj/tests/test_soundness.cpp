#include <gtest/gtest.h>

#include "ik/instances.hpp"
#include "ik/kripke.hpp"

namespace ik {
namespace {

// Bars of a 3-branching tree of height 2 have up to 9 nodes.
Signature wide_signature() {
  auto sig = sample_signature();
  sig.conn_bound = 16;
  return sig;
}

TEST(Instances, EveryRuleGeneratesAcceptedInstances) {
  Rng rng(41);
  auto sig = wide_signature();
  for (auto rule : all_rules())
    for (int i = 0; i < 200; ++i) {
      auto inst = random_instance(rng, sig, rule);
      auto v = check_rule_instance(rule, inst.payload, inst.premises, inst.conclusion);
      ASSERT_TRUE(v.ok) << v.reason;
      check_sequent(sig, inst.conclusion);
    }
}

TEST(Instances, CorruptedConclusionsAreRejected) {
  Rng rng(42);
  auto sig = wide_signature();
  for (auto rule : all_rules()) {
    if (rule == Rule::TheoryAxiom) continue;
    for (int i = 0; i < 50; ++i) {
      auto inst = random_instance(rng, sig, rule);
      auto bad = inst.conclusion;
      // An empty disjunction on the left proves anything, so corrupt that side.
      auto& side = rule == Rule::DisjElim ? bad.antecedent : bad.succedent;
      side = make_and({side, make_bottom()});
      EXPECT_FALSE(check_rule_instance(rule, inst.payload, inst.premises, bad).ok)
          << rule_name(rule);
    }
  }
}

TEST(Soundness, AllRulesOnRandomModels) {
  Rng rng(43);
  auto sig = wide_signature();
  ModelGenOptions shape;
  shape.max_worlds = 3;
  shape.max_elems = 2;
  for (auto rule : all_rules()) {
    std::size_t live = 0;
    for (int i = 0; i < 150; ++i) {
      auto inst = random_instance(rng, sig, rule);
      auto m = random_model(rng, sig, shape);
      auto premises = inst.premises;
      if (rule == Rule::TheoryAxiom) premises.push_back(inst.conclusion);
      bool all_hold = std::all_of(premises.begin(), premises.end(),
                                  [&](const Sequent& s) { return holds_sequent(m, s); });
      live += all_hold;
      auto v = check_soundness(premises, inst.conclusion, m);
      ASSERT_TRUE(v.ok) << rule_name(rule) << ": " << v.reason;
    }
    EXPECT_GT(live, 0u) << rule_name(rule);
  }
}

}  // namespace
}  // namespace ik
