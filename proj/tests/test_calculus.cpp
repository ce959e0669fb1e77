#include <gtest/gtest.h>

#include <set>

#include "ik/calculus.hpp"
#include "ik/derivation_io.hpp"
#include "ik/random.hpp"

namespace ik {
namespace {

Signature sig() {
  return parse_signature(
      "sort S\n"
      "rel P : S\nrel Q : S\nrel R : S,S\nrel A\nrel B\nrel C\nrel D\nrel E\n"
      "const c : S\n");
}

Sequent seq(const std::string& s) { return parse_sequent(s, sig(), ParseOptions{true}); }
Formula fml(const std::string& s, const Context& known = {}) {
  return parse_formula(s, sig(), known, ParseOptions{true});
}

DerivationPtr node(Rule r, const std::string& conclusion, std::vector<DerivationPtr> prems = {},
                   Payload p = {}) {
  auto d = std::make_shared<Derivation>();
  d->rule = r;
  d->conclusion = seq(conclusion);
  d->premises = std::move(prems);
  d->payload = std::move(p);
  return d;
}

Payload index(std::size_t j) {
  Payload p;
  p.index = j;
  return p;
}

// ---------------------------------------------------------------- bars

Bar bar(std::vector<Address> nodes) { return Bar{std::move(nodes)}; }

TEST(CheckBar, Examples) {
  EXPECT_TRUE(check_bar(2, 1, bar({{0}, {1}})).ok);
  EXPECT_TRUE(check_bar(2, 2, bar({{0}, {1, 0}, {1, 1}})).ok);
  auto v = check_bar(2, 2, bar({{0}, {0, 1}}));
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("<0> and <0,1>"), std::string::npos) << v.reason;
  v = check_bar(2, 2, bar({{0}, {1, 0}}));
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("<1,1>"), std::string::npos) << v.reason;
  EXPECT_TRUE(check_bar(3, 2, bar({{}})).ok);
  EXPECT_THROW(check_bar(2, 2, bar({{2}})), std::out_of_range);
  EXPECT_THROW(check_bar(2, 1, bar({{0, 0}})), std::out_of_range);
}

// Oracle: a set of nodes is a bar iff every leaf has exactly one prefix in it.
bool bar_oracle(std::size_t gamma, std::size_t height, const std::set<Address>& b) {
  std::vector<Address> leaves{Address{}};
  for (std::size_t l = 0; l < height; ++l) {
    std::vector<Address> next;
    for (const auto& a : leaves)
      for (std::size_t i = 0; i < gamma; ++i) {
        auto c = a;
        c.push_back(i);
        next.push_back(c);
      }
    leaves = next;
  }
  for (const auto& leaf : leaves) {
    int hits = 0;
    for (std::size_t len = 0; len <= leaf.size(); ++len)
      hits += b.count(Address(leaf.begin(), leaf.begin() + len));
    if (hits != 1) return false;
  }
  return true;
}

TEST(CheckBar, AgreesWithOracleExhaustively) {
  for (std::size_t gamma = 1; gamma <= 3; ++gamma)
    for (std::size_t height = 1; height <= 3; ++height) {
      auto nodes = tree_addresses(gamma, height);
      if (nodes.size() > 16) continue;
      for (std::uint32_t mask = 0; mask < (1u << nodes.size()); ++mask) {
        Bar b;
        std::set<Address> s;
        for (std::size_t i = 0; i < nodes.size(); ++i)
          if (mask >> i & 1) {
            b.nodes.push_back(nodes[i]);
            s.insert(nodes[i]);
          }
        ASSERT_EQ(check_bar(gamma, height, b).ok, bar_oracle(gamma, height, s))
            << gamma << " " << height << " " << mask;
      }
    }
}

// Random subsets plus random genuine bars (grown by cutting branches).
TEST(CheckBar, AgreesWithOracleOnLargeTrees) {
  Rng rng(11);
  std::size_t accepted = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::size_t gamma = uniform(rng, 1, 3), height = uniform(rng, 1, 3);
    std::set<Address> s;
    if (trial % 2 == 0) {
      for (const auto& a : tree_addresses(gamma, height))
        if (coin(rng, 0.2)) s.insert(a);
    } else {
      std::vector<Address> open{Address{}};
      while (!open.empty()) {
        auto a = open.back();
        open.pop_back();
        if (a.size() == height || coin(rng, 0.3)) {
          s.insert(a);
          continue;
        }
        for (std::size_t i = 0; i < gamma; ++i) {
          auto c = a;
          c.push_back(i);
          open.push_back(c);
        }
      }
    }
    Bar b{std::vector<Address>(s.begin(), s.end())};
    bool expect = bar_oracle(gamma, height, s);
    accepted += expect;
    ASSERT_EQ(check_bar(gamma, height, b).ok, expect);
  }
  EXPECT_GT(accepted, 1000u);
}

// ---------------------------------------------------------------- rule instances

TEST(Rules, IdentityAndCut) {
  EXPECT_TRUE(check_rule_instance(Rule::Identity, {}, {}, seq("P(x) |- [x:S] P(x)")).ok);
  EXPECT_FALSE(check_rule_instance(Rule::Identity, {}, {}, seq("P(x) |- [x:S] Q(x)")).ok);

  auto pq = node(Rule::TheoryAxiom, "A |- [] B");
  auto qr = node(Rule::TheoryAxiom, "B |- [] C");
  Theory t{{"ab", seq("A |- [] B")}, {"bc", seq("B |- [] C")}};
  EXPECT_TRUE(check_derivation(*node(Rule::Cut, "A |- [] C", {pq, qr}), t).ok);
  auto bad = check_derivation(*node(Rule::Cut, "A |- [] B", {pq, qr}), t);
  EXPECT_FALSE(bad.ok);
  EXPECT_TRUE(bad.path.empty());
  EXPECT_FALSE(check_derivation(*node(Rule::Cut, "A |- [] C", {pq, qr}), {t[0]}).ok);
}

TEST(Rules, DerivationReportsPathToFailure) {
  auto ok = node(Rule::Identity, "A |- [] A");
  auto wrong = node(Rule::Identity, "A |- [] B");
  auto root = node(Rule::Cut, "A |- [] B", {ok, wrong});
  auto v = check_derivation(*root, {});
  ASSERT_FALSE(v.ok);
  EXPECT_EQ(v.path, (std::vector<std::size_t>{1}));
}

TEST(Rules, Substitution) {
  Payload p;
  p.terms = {make_app("c", {}, "S")};
  auto prem = seq("P(x) |- [x:S] Q(x)");
  EXPECT_TRUE(check_rule_instance(Rule::Substitution, p, {prem}, seq("P(c) |- [] Q(c)")).ok);

  Payload q;
  q.terms = {make_var("y", "S")};
  q.target = {Var{"y", "S"}, Var{"z", "S"}};
  EXPECT_TRUE(
      check_rule_instance(Rule::Substitution, q, {prem}, seq("P(y) |- [y:S, z:S] Q(y)")).ok);
  // The target context must contain the variables of the terms.
  q.target = {Var{"z", "S"}};
  EXPECT_FALSE(check_rule_instance(Rule::Substitution, q, {prem}, seq("P(z) |- [z:S] Q(z)")).ok);
}

TEST(Rules, Equality) {
  EXPECT_TRUE(check_rule_instance(Rule::EqRefl, {}, {}, seq("true |- [x:S] eq(x, x)")).ok);
  EXPECT_FALSE(check_rule_instance(Rule::EqRefl, {}, {}, seq("true |- [x:S, y:S] eq(x, x)")).ok);

  Payload p;
  p.eq_x = {Var{"a", "S"}};
  p.eq_y = {Var{"b", "S"}};
  p.eq_w = {Var{"w", "S"}};
  p.phi = fml("R(w, c)");
  auto c = seq("and(eq(a, b), R(a, c)) |- [a:S, b:S] R(b, c)");
  EXPECT_TRUE(check_rule_instance(Rule::EqSubst, p, {}, c).ok);
  auto swapped = seq("and(eq(a, b), R(b, c)) |- [a:S, b:S] R(a, c)");
  EXPECT_FALSE(check_rule_instance(Rule::EqSubst, p, {}, swapped).ok);
}

TEST(Rules, ConjunctionAndDisjunction) {
  EXPECT_TRUE(check_rule_instance(Rule::ConjElim, index(1), {}, seq("and(A, B) |- [] B")).ok);
  EXPECT_FALSE(check_rule_instance(Rule::ConjElim, index(2), {}, seq("and(A, B) |- [] B")).ok);
  EXPECT_TRUE(check_rule_instance(Rule::DisjIntro, index(0), {}, seq("A |- [] or(A, B)")).ok);
  EXPECT_TRUE(check_rule_instance(Rule::ConjIntro, {}, {}, seq("A |- [] true")).ok);
  EXPECT_TRUE(check_rule_instance(Rule::DisjElim, {}, {}, seq("false |- [] A")).ok);
  EXPECT_TRUE(check_rule_instance(Rule::ConjIntro, {}, {seq("A |- [] B"), seq("A |- [] C")},
                                  seq("A |- [] and(B, C)"))
                  .ok);
  EXPECT_FALSE(check_rule_instance(Rule::ConjIntro, {}, {seq("A |- [] B")},
                                   seq("A |- [] and(B, C)"))
                   .ok);
  EXPECT_TRUE(check_rule_instance(Rule::DisjElim, {}, {seq("A |- [] C"), seq("B |- [] C")},
                                  seq("or(A, B) |- [] C"))
                  .ok);
}

TEST(Rules, ImplicationBothDirections) {
  auto upper = seq("and(A, B) |- [] C");
  auto lower = seq("A |- [] imp(B, C)");
  EXPECT_TRUE(check_rule_instance(Rule::ImpIntro, {}, {upper}, lower).ok);
  EXPECT_TRUE(check_rule_instance(Rule::ImpElim, {}, {lower}, upper).ok);
  EXPECT_FALSE(check_rule_instance(Rule::ImpIntro, {}, {lower}, upper).ok);
  EXPECT_FALSE(check_rule_instance(Rule::ImpIntro, {}, {seq("and(B, A) |- [] C")}, lower).ok);
}

TEST(Rules, QuantifiersWithFreshness) {
  auto upper = seq("R(x, y) |- [x:S, y:S] P(x)");
  auto lower = seq("ex([y:S], R(x, y)) |- [x:S] P(x)");
  EXPECT_TRUE(check_rule_instance(Rule::ExElim, {}, {upper}, lower).ok);
  EXPECT_TRUE(check_rule_instance(Rule::ExIntro, {}, {lower}, upper).ok);
  // y free in the succedent: the lower sequent is not even well formed.
  auto bad_upper = seq("R(x, y) |- [x:S, y:S] P(y)");
  auto bad_lower = seq("ex([y:S], R(x, y)) |- [x:S, y:S] P(y)");
  auto v = check_rule_instance(Rule::ExElim, {}, {bad_upper}, bad_lower);
  EXPECT_FALSE(v.ok);

  auto aupper = seq("P(x) |- [x:S, y:S] R(x, y)");
  auto alower = seq("P(x) |- [x:S] all([y:S], R(x, y))");
  EXPECT_TRUE(check_rule_instance(Rule::AllIntro, {}, {aupper}, alower).ok);
  EXPECT_TRUE(check_rule_instance(Rule::AllElim, {}, {alower}, aupper).ok);
  auto wrong_order = seq("P(x) |- [y:S, x:S] R(x, y)");
  EXPECT_FALSE(check_rule_instance(Rule::AllIntro, {}, {wrong_order}, alower).ok);
}

TEST(Rules, QuantifierFreshnessViolation) {
  auto upper = seq("P(y) |- [x:S, y:S] R(x, y)");
  Sequent lower{fml("P(y)"), {Var{"x", "S"}}, fml("all([y:S], R(x, y))")};
  auto v = check_rule_instance(Rule::AllIntro, {}, {upper}, lower);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("'y'"), std::string::npos) << v.reason;
}

TreeFamily law_tree() {
  TreeFamily t;
  t.gamma = 2;
  t.height = 1;
  t.label[{}] = fml("or(A, and(B, C))");
  t.label[{0}] = fml("or(A, B)");
  t.label[{1}] = fml("or(A, C)");
  return t;
}

TEST(Rules, DualDistLevelOne) {
  Payload p;
  p.tree = law_tree();
  p.bar = Bar{{{0}, {1}}};
  auto prem = seq("and(or(A, B), or(A, C)) |- [] or(A, and(B, C))");
  auto concl = seq("and(or(or(A, B)), or(or(A, C))) |- [] or(A, and(B, C))");
  EXPECT_TRUE(check_rule_instance(Rule::DualDist, p, {prem}, concl).ok);
  EXPECT_EQ(print(dual_dist_conclusion(*p.tree, *p.bar, {})), print(concl));

  p.bar = Bar{{{0}}};
  auto v = check_rule_instance(Rule::DualDist, p, {prem}, concl);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("misses the bar"), std::string::npos);

  p.bar = Bar{{{0}, {1}}};
  p.limits = {fml("A")};
  EXPECT_FALSE(check_rule_instance(Rule::DualDist, p, {prem}, concl).ok);
}

Payload trans_payload(const std::string& child, const Context& block) {
  Payload p;
  TreeFamily t;
  t.gamma = 1;
  t.height = 1;
  t.label[{}] = fml("P(x)");
  t.label[{0}] = fml(child);
  t.contexts[{}] = {Var{"x", "S"}};
  t.blocks[{0}] = block;
  p.tree = t;
  p.bar = Bar{{{0}}};
  return p;
}

TEST(Rules, TransTrans) {
  auto p = trans_payload("R(x, y)", {Var{"y", "S"}});
  auto prem = seq("P(x) |- [x:S] or(ex([y:S], R(x, y)))");
  auto concl = seq("P(x) |- [x:S] or(ex([y:S], and(R(x, y))))");
  EXPECT_TRUE(check_rule_instance(Rule::TransTrans, p, {prem}, concl).ok);

  auto bad = trans_payload("R(x, x)", {Var{"x", "S"}});
  auto v = check_rule_instance(Rule::TransTrans, bad, {seq("P(x) |- [x:S] or(ex([x:S], R(x, x)))")},
                               seq("P(x) |- [x:S] or(ex([x:S], and(R(x, x))))"));
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("side condition"), std::string::npos) << v.reason;
  EXPECT_NE(v.reason.find("meets FV"), std::string::npos) << v.reason;

  auto missing = trans_payload("P(x)", {Var{"y", "S"}});
  v = check_rule_instance(Rule::TransTrans, missing, {seq("P(x) |- [x:S] or(ex([y:S], P(x)))")},
                          seq("P(x) |- [x:S] or(ex([y:S], and(P(x))))"));
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.reason.find("side condition"), std::string::npos) << v.reason;
}

// Cutting a tree rule instance to height L with the bar at level L.
TEST(Rules, LevelBarsAreBars) {
  for (std::size_t g = 1; g <= 3; ++g)
    for (std::size_t d = 1; d <= 3; ++d) {
      Bar b;
      for (const auto& a : tree_addresses(g, d))
        if (a.size() == d) b.nodes.push_back(a);
      EXPECT_TRUE(check_bar(g, d, b).ok);
    }
}

// ---------------------------------------------------------------- distributive law

TEST(DistributiveLaw, DegenerateWidthOne) {
  auto d = derive_distributive_law(fml("A"), {fml("B")});
  EXPECT_TRUE(check_derivation(*d, {}).ok) << check_derivation(*d, {}).reason;
  EXPECT_EQ(print(d->conclusion), "and(or(A, B)) |- [] or(A, and(B))");
  EXPECT_THROW(derive_distributive_law(fml("A"), {}), std::invalid_argument);
}

bool uses_rule(const Derivation& d, Rule r) {
  if (d.rule == r) return true;
  for (const auto& p : d.premises)
    if (uses_rule(*p, r)) return true;
  return false;
}

TEST(DistributiveLaw, WidthsUpToFour) {
  std::vector<Formula> psis{fml("B"), fml("C"), fml("D"), fml("E")};
  for (std::size_t g = 1; g <= 4; ++g) {
    std::vector<Formula> ps(psis.begin(), psis.begin() + g);
    auto d = derive_distributive_law(fml("A"), ps);
    auto v = check_derivation(*d, {});
    ASSERT_TRUE(v.ok) << g << ": " << v.reason;
    EXPECT_TRUE(uses_rule(*d, Rule::DualDist));
    std::vector<Formula> clauses;
    for (const auto& p : ps) clauses.push_back(make_or({fml("A"), p}));
    EXPECT_TRUE(schema_equal(d->conclusion.antecedent, make_and(clauses)));
    EXPECT_TRUE(schema_equal(d->conclusion.succedent, make_or({fml("A"), make_and(ps)})));
  }
}

TEST(DistributiveLaw, OpenFormulas) {
  auto d = derive_distributive_law(fml("P(x)"), {fml("R(x, y)"), fml("ex([z:S], R(z, y))")});
  auto v = check_derivation(*d, {}, nullptr);
  ASSERT_TRUE(v.ok) << v.reason;
  EXPECT_EQ(d->conclusion.context, (Context{Var{"x", "S"}, Var{"y", "S"}}));
  auto s = sig();
  s.conn_bound = 2;
  EXPECT_THROW(derive_distributive_law(fml("A"), {fml("B"), fml("C"), fml("D")}, &s),
               std::invalid_argument);
}

// ---------------------------------------------------------------- file format

TEST(DerivationFile, RoundTrip) {
  auto s = sig();
  auto d = derive_distributive_law(fml("P(x)"), {fml("Q(x)"), fml("R(x, c)"), fml("A")});
  auto text = write_derivation(*d, &s);
  auto file = parse_derivation_file(text);
  auto v = check_derivation(*file.root, {}, &file.sig);
  ASSERT_TRUE(v.ok) << v.reason;
  EXPECT_TRUE(schema_equal(file.root->conclusion, d->conclusion));
  EXPECT_EQ(write_derivation(*file.root, &file.sig), text);
}

TEST(DerivationFile, TreePayloadRoundTrip) {
  auto p = trans_payload("R(x, y)", {Var{"y", "S"}});
  auto text = std::string("rel P/1\nrel R/2\n") +
              "a: theory-axiom premises=[] payload={axiom=step} conclusion=P(x) |- [x:S] "
              "or(ex([y:S], R(x, y)))\n"
              "b: trans-trans premises=[a] payload=" +
              print_payload(p) + " conclusion=P(x) |- [x:S] or(ex([y:S], and(R(x, y))))\n";
  auto file = parse_derivation_file(text);
  Theory t{{"step", parse_sequent("P(x) |- [x:S] or(ex([y:S], R(x, y)))", file.sig)}};
  auto v = check_derivation(*file.root, t, &file.sig);
  EXPECT_TRUE(v.ok) << v.reason;
  EXPECT_EQ(file.nodes, 2u);
}

TEST(DerivationFile, Malformed) {
  EXPECT_THROW(parse_derivation_file(""), SyntaxError);
  EXPECT_THROW(parse_derivation_file("a: nonsense premises=[] conclusion=true |- [] true"),
               SyntaxError);
  EXPECT_THROW(parse_derivation_file("a: cut premises=[zz] conclusion=true |- [] true"),
               SyntaxError);
  try {
    parse_derivation_file("rel A\na: identity premises=[] payload={j=} conclusion=A |- [] A");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  auto f = parse_derivation_file("rel A\na: identity premises=[] conclusion=A |- [] A\n");
  EXPECT_TRUE(check_derivation(*f.root, {}, &f.sig).ok);
}

}  // namespace
}  // namespace ik
