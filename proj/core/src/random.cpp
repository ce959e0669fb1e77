#include "ik/random.hpp"

#include <algorithm>

namespace ik {

Term random_term(Rng& rng, const Signature& sig, const Context& scope, const std::string& sort,
                 std::size_t depth) {
  std::vector<Term> leaves;
  for (const auto& v : scope)
    if (v.sort == sort) leaves.push_back(make_var(v));
  for (const auto& c : sig.constants_of(sort)) leaves.push_back(make_app(c, {}, sort));

  std::vector<std::pair<std::string, const FunDecl*>> fns;
  for (const auto& [name, decl] : sig.functions)
    if (!decl.args.empty() && decl.result == sort) fns.emplace_back(name, &decl);

  if (depth > 0 && !fns.empty() && (leaves.empty() || coin(rng, 0.25))) {
    const auto& [name, decl] = fns[uniform(rng, 0, fns.size() - 1)];
    std::vector<Term> args;
    for (const auto& s : decl->args) args.push_back(random_term(rng, sig, scope, s, depth - 1));
    if (std::all_of(args.begin(), args.end(), [](const Term& t) { return t != nullptr; }))
      return make_app(name, std::move(args), sort);
  }
  if (leaves.empty()) return nullptr;
  return leaves[uniform(rng, 0, leaves.size() - 1)];
}

namespace {

struct Generator {
  Rng& rng;
  const Signature& sig;
  const FormulaGenOptions& opts;
  std::size_t next_bound = 0;

  Formula leaf(const Context& scope) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::size_t pick = uniform(rng, 0, 9);
      if (pick == 0) return coin(rng) ? make_top() : make_bottom();
      if (pick == 1 && opts.equality && !sig.sorts.empty()) {
        const auto& s = sig.sorts[uniform(rng, 0, sig.sorts.size() - 1)];
        auto a = random_term(rng, sig, scope, s);
        auto b = random_term(rng, sig, scope, s);
        if (a && b) return make_eq(a, b);
        continue;
      }
      if (sig.relations.empty()) continue;
      auto it = sig.relations.begin();
      std::advance(it, uniform(rng, 0, sig.relations.size() - 1));
      std::vector<Term> args;
      bool ok = true;
      for (const auto& s : it->second) {
        auto t = random_term(rng, sig, scope, s);
        if (!t) {
          ok = false;
          break;
        }
        args.push_back(t);
      }
      if (ok) return make_atom(it->first, std::move(args));
    }
    return make_top();
  }

  Formula gen(const Context& scope, std::size_t depth) {
    if (depth == 0 || coin(rng, 0.3)) return leaf(scope);
    std::size_t pick = uniform(rng, 0, 5);
    if (pick == 2 && !opts.implications) pick = 0;
    if (pick == 4 && !opts.universals) pick = 3;
    if ((pick == 3 || pick == 5) && (!opts.existentials || sig.sorts.empty())) pick = 1;
    if (pick == 4 && sig.sorts.empty()) pick = 0;
    switch (pick) {
      case 0:
      case 1: {
        std::size_t w = uniform(rng, 0, opts.max_width);
        std::vector<Formula> kids;
        for (std::size_t i = 0; i < w; ++i) kids.push_back(gen(scope, depth - 1));
        return pick == 0 ? make_and(std::move(kids)) : make_or(std::move(kids));
      }
      case 2:
        return make_imp(gen(scope, depth - 1), gen(scope, depth - 1));
      default: {
        std::size_t n = uniform(rng, 1, std::max<std::size_t>(1, opts.max_block));
        std::vector<Var> block;
        for (std::size_t i = 0; i < n; ++i) {
          const auto& s = sig.sorts[uniform(rng, 0, sig.sorts.size() - 1)];
          block.push_back(Var{"q" + std::to_string(next_bound++), s});
        }
        Context inner = scope;
        inner.insert(inner.end(), block.begin(), block.end());
        Formula body = gen(inner, depth - 1);
        return pick == 4 ? make_forall(std::move(block), std::move(body))
                         : make_exists(std::move(block), std::move(body));
      }
    }
  }
};

}  // namespace

Formula random_formula(Rng& rng, const Signature& sig, const Context& scope,
                       const FormulaGenOptions& opts) {
  Generator g{rng, sig, opts};
  return g.gen(scope, opts.max_depth);
}

Signature sample_signature() {
  Signature sig;
  sig.add_sort("S");
  sig.add_sort("T");
  sig.add_relation("P", {"S"});
  sig.add_relation("Q", {"S"});
  sig.add_relation("R", {"S", "S"});
  sig.add_relation("K", {"S", "T"});
  sig.add_relation("Z", {});
  sig.add_constant("c", "S");
  sig.add_constant("d", "S");
  sig.add_constant("e", "T");
  sig.add_function("f", {"S"}, "S");
  return sig;
}

}  // namespace ik
