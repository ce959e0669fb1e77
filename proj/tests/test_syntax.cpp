#include <gtest/gtest.h>

#include "ik/random.hpp"
#include "ik/syntax.hpp"

namespace ik {
namespace {

Signature unary_sig() {
  return parse_signature(
      "sort S\n"
      "rel P : S\n"
      "rel Q : S\n"
      "rel R : S,S\n"
      "const c : S\n");
}

TEST(Parse, TrueIsTop) {
  auto f = parse_formula("true", unary_sig());
  EXPECT_EQ(f->conn, Conn::Top);
}

TEST(Parse, BinaryDisjunctionOfAtoms) {
  auto f = parse_formula("or(P(c), Q(c))", unary_sig());
  ASSERT_EQ(f->conn, Conn::Or);
  ASSERT_EQ(f->kids.size(), 2u);
  EXPECT_EQ(f->kids[0]->rel, "P");
  EXPECT_EQ(f->kids[1]->rel, "Q");
  EXPECT_EQ(f->kids[0]->terms[0]->kind, TermNode::Kind::Apply);
}

TEST(Parse, ExistentialHasNoFreeVariables) {
  auto f = parse_formula("ex([x:S], and(R(x,c), P(x)))", unary_sig());
  EXPECT_EQ(f->conn, Conn::Exists);
  EXPECT_TRUE(free_vars(f).empty());
}

TEST(Parse, SyntaxErrorReportsPosition) {
  try {
    parse_formula("and(P(c),, Q(c))", unary_sig());
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 10u);
  }
}

TEST(Parse, SortErrorNamesSymbol) {
  auto sig = parse_signature("sort S\nsort T\nrel P : S\nconst e : T\n");
  try {
    parse_formula("P(e)", sig);
    FAIL() << "expected a sort error";
  } catch (const SortError& e) {
    EXPECT_NE(std::string(e.what()).find("'e'"), std::string::npos);
  }
  EXPECT_THROW(parse_formula("W(e)", sig), SortError);
}

TEST(Parse, ArityBoundViolation) {
  auto sig = unary_sig();
  sig.arity_bound = 2;
  EXPECT_THROW(parse_formula("ex([x:S, y:S], R(x,y))", sig), SortError);
  EXPECT_THROW(sig.add_relation("W", {"S", "S"}), SortError);
  sig.conn_bound = 1;
  EXPECT_THROW(parse_formula("and(P(c), P(c))", sig), SortError);
}

TEST(Parse, ReservedNamesRejected) {
  EXPECT_THROW(parse_formula("P(_v0)", unary_sig()), SyntaxError);
  EXPECT_NO_THROW(parse_formula("P(_v0)", unary_sig(), {}, ParseOptions{true}));
}

TEST(Parse, ImplicitDefaultSort) {
  auto sig = parse_signature("rel P/1\nrel R/2\nconst c\n");
  auto f = parse_formula("all([x], imp(P(x), R(x, c)))", sig);
  EXPECT_EQ(f->block[0].sort, "S");
  EXPECT_TRUE(free_vars(f).empty());
}

TEST(Parse, SequentUsesContextSorts) {
  auto sig = parse_signature("sort S\nsort T\nrel P : S\n");
  auto s = parse_sequent("eq(x, y) |- [x:T, y:T] true", sig);
  EXPECT_EQ(s.context.size(), 2u);
  EXPECT_EQ(s.antecedent->terms[0]->sort, "T");
  EXPECT_THROW(parse_sequent("P(x) |- [] P(x)", sig), SortError);
}

TEST(FreeVars, Examples) {
  auto sig = unary_sig();
  EXPECT_TRUE(free_vars(make_top()).empty());
  auto rx = parse_formula("R(x, c)", sig);
  EXPECT_EQ(free_vars(rx), (VarSet{Var{"x", "S"}}));
  // free_vars(forall x R(x,y) -> P(y)) = {y}
  auto f = parse_formula("imp(all([x:S], R(x, y)), P(y))", sig);
  EXPECT_EQ(free_vars(f), (VarSet{Var{"y", "S"}}));
}

TEST(Substitute, Examples) {
  auto sig = unary_sig();
  Term c = make_app("c", {}, "S");
  auto px = parse_formula("P(x)", sig);
  EXPECT_TRUE(same(substitute(px, {{Var{"x", "S"}, c}}), parse_formula("P(c)", sig)));

  auto ey = parse_formula("ex([y:S], P(y))", sig);
  EXPECT_TRUE(same(substitute(ey, {{Var{"y", "S"}, c}}), ey));

  // Capture avoidance: (ex y. R(x,y))[y/x] renames the bound y.
  auto exy = parse_formula("ex([y:S], R(x, y))", sig);
  auto out = substitute(exy, {{Var{"x", "S"}, make_var("y", "S")}});
  ASSERT_EQ(out->conn, Conn::Exists);
  EXPECT_EQ(out->block[0].name, "_v0");
  EXPECT_EQ(print(out), "ex([_v0:S], R(y, _v0))");
  EXPECT_EQ(free_vars(out), (VarSet{Var{"y", "S"}}));
}

TEST(Substitute, RejectsNothingButChecksSortsDownstream) {
  auto sig = parse_signature("sort S\nsort T\nrel P : S\nconst e : T\n");
  auto px = parse_formula("P(x)", sig);
  auto bad = substitute(px, {{Var{"x", "S"}, make_app("e", {}, "T")}});
  EXPECT_THROW(check_formula(sig, bad), SortError);
}

TEST(Print, Examples) {
  auto sig = unary_sig();
  EXPECT_EQ(print(make_top()), "true");
  EXPECT_EQ(print(parse_formula("P(c)", sig)), "P(c)");
  EXPECT_EQ(print(parse_formula("and()", sig)), "and()");
  auto s = parse_sequent("P(x) |- [x:S] or(P(x), Q(x))", sig);
  EXPECT_EQ(print(s), "P(x) |- [x:S] or(P(x), Q(x))");
}

TEST(SchemaEqual, IdentifiesDegenerateForms) {
  auto sig = unary_sig();
  EXPECT_TRUE(schema_equal(make_top(), make_and({})));
  EXPECT_TRUE(schema_equal(make_bottom(), make_or({})));
  EXPECT_TRUE(schema_equal(parse_formula("ex([], P(c))", sig), parse_formula("P(c)", sig)));
  EXPECT_FALSE(same(make_top(), make_and({})));
  EXPECT_TRUE(alpha_equal(parse_formula("ex([x:S], P(x))", sig),
                          parse_formula("ex([y:S], P(y))", sig)));
  EXPECT_FALSE(alpha_equal(parse_formula("ex([x:S], R(x, y))", sig),
                           parse_formula("ex([y:S], R(y, y))", sig)));
}

// ---------------------------------------------------------------- properties

Context scope_vars() {
  return {Var{"x", "S"}, Var{"y", "S"}, Var{"z", "S"}, Var{"u", "T"}};
}

TEST(Property, PrintParseRoundTrip) {
  Rng rng(1);
  auto sig = sample_signature();
  for (int i = 0; i < 1000; ++i) {
    auto f = random_formula(rng, sig, scope_vars());
    auto fv = free_vars(f);
    Context known(fv.begin(), fv.end());
    auto g = parse_formula(print(f), sig, known);
    ASSERT_TRUE(same(f, g)) << print(f) << "\n" << print(g);
  }
}

Substitution random_substitution(Rng& rng, const Signature& sig, const Context& dom,
                                 const Context& range) {
  Substitution sub;
  for (const auto& v : dom)
    if (coin(rng)) sub[v] = random_term(rng, sig, range, v.sort);
  return sub;
}

TEST(Property, FreeVariablesAfterSubstitution) {
  Rng rng(2);
  auto sig = sample_signature();
  for (int i = 0; i < 500; ++i) {
    auto f = random_formula(rng, sig, scope_vars());
    auto sub = random_substitution(rng, sig, scope_vars(), {Var{"x", "S"}, Var{"w", "S"}});
    VarSet expected;
    for (const auto& v : free_vars(f)) {
      auto it = sub.find(v);
      if (it == sub.end())
        expected.insert(v);
      else
        term_vars(it->second, expected);
    }
    ASSERT_EQ(free_vars(substitute(f, sub)), expected) << print(f);
  }
}

TEST(Property, SubstitutionComposes) {
  Rng rng(3);
  auto sig = sample_signature();
  Context first_range{Var{"y", "S"}, Var{"w", "S"}};
  for (int i = 0; i < 500; ++i) {
    auto f = random_formula(rng, sig, scope_vars());
    auto sigma = random_substitution(rng, sig, scope_vars(), first_range);
    auto tau = random_substitution(rng, sig, {Var{"y", "S"}, Var{"w", "S"}, Var{"z", "S"}},
                                   {Var{"x", "S"}});
    Substitution composed;
    for (const auto& [v, t] : sigma) composed[v] = substitute_term(t, tau);
    for (const auto& [v, t] : tau)
      if (!sigma.count(v)) composed[v] = t;
    auto lhs = substitute(substitute(f, sigma), tau);
    auto rhs = substitute(f, composed);
    ASSERT_TRUE(alpha_equal(lhs, rhs)) << print(f) << "\n" << print(lhs) << "\n" << print(rhs);
  }
}

}  // namespace
}  // namespace ik
