#include "ik/saturate.hpp"

namespace ik {

namespace {

FormulaGenOptions coherent_shape(const TheoryGenOptions& opts) {
  FormulaGenOptions f;
  f.max_depth = opts.formula_depth;
  f.max_width = 2;
  f.max_block = 1;
  f.implications = false;
  f.universals = false;
  return f;
}

}  // namespace

TheoryFile random_coherent_theory(Rng& rng, const TheoryGenOptions& opts) {
  for (;;) {
    TheoryFile t;
    t.sig.add_sort("S");
    std::size_t nc = uniform(rng, 1, opts.max_constants);
    for (std::size_t i = 0; i < nc; ++i) t.sig.add_constant("c" + std::to_string(i), "S");
    std::size_t nr = uniform(rng, 1, opts.max_relations);
    std::size_t atoms = 0, width = 1;
    for (std::size_t i = 0; i < nr; ++i) {
      std::size_t arity = uniform(rng, 0, opts.max_arity);
      t.sig.add_relation("R" + std::to_string(i), std::vector<std::string>(arity, "S"));
      width = 1;
      for (std::size_t k = 0; k < arity; ++k) width *= nc;
      atoms += width;
    }
    if (atoms > opts.max_atoms) continue;
    std::size_t na = uniform(rng, 0, opts.max_axioms);
    for (std::size_t i = 0; i < na; ++i)
      t.axioms.push_back({"a" + std::to_string(i), random_coherent_sequent(rng, t.sig, opts)});
    return t;
  }
}

Sequent random_coherent_sequent(Rng& rng, const Signature& sig, const TheoryGenOptions& opts) {
  Context ctx;
  if (coin(rng)) ctx.push_back(Var{"x", "S"});
  auto shape = coherent_shape(opts);
  return Sequent{random_formula(rng, sig, ctx, shape), ctx, random_formula(rng, sig, ctx, shape)};
}

}  // namespace ik
