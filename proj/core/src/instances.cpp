#include "ik/instances.hpp"

#include <algorithm>
#include <functional>

namespace ik {

namespace {

class InstanceGen {
public:
  InstanceGen(Rng& rng, const Signature& sig, const InstanceGenOptions& opts)
      : rng_(rng), sig_(sig), opts_(opts) {}

  RuleInstance make(Rule rule) {
    RuleInstance r;
    r.rule = rule;
    switch (rule) {
      case Rule::Identity: {
        auto ctx = context();
        auto phi = formula(ctx);
        r.conclusion = {phi, ctx, phi};
        break;
      }
      case Rule::Substitution: {
        auto from = context(1);
        auto to = context();
        Substitution sub;
        for (const auto& v : from) {
          auto t = random_term(rng_, sig_, to, v.sort, 1);
          r.payload.terms.push_back(t);
          sub[v] = t;
        }
        // Every variable of the terms must occur in the target context.
        VarSet used;
        for (const auto& t : r.payload.terms) term_vars(t, used);
        for (const auto& v : used)
          if (std::find(to.begin(), to.end(), v) == to.end()) to.push_back(v);
        r.payload.target = to;
        Sequent prem{formula(from), from, formula(from)};
        r.premises = {prem};
        r.conclusion = {substitute(prem.antecedent, sub), to, substitute(prem.succedent, sub)};
        break;
      }
      case Rule::Cut: {
        auto ctx = context();
        auto a = formula(ctx), b = formula(ctx), c = formula(ctx);
        r.premises = {{a, ctx, b}, {b, ctx, c}};
        r.conclusion = {a, ctx, c};
        break;
      }
      case Rule::EqRefl: {
        Var x = fresh(pick_sort());
        r.conclusion = {make_top(), {x}, make_eq(make_var(x), make_var(x))};
        break;
      }
      case Rule::EqSubst: {
        std::size_t n = uniform(rng_, 1, opts_.max_block);
        auto extra = context();
        Context w;
        Substitution to_x, to_y;
        std::vector<Formula> conj;
        Context xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
          auto sort = pick_sort();
          Var x = fresh(sort), y = fresh(sort), v = fresh(sort);
          xs.push_back(x);
          ys.push_back(y);
          w.push_back(v);
          to_x[v] = make_var(x);
          to_y[v] = make_var(y);
          conj.push_back(make_eq(make_var(x), make_var(y)));
        }
        auto phi = formula(concat(w, extra));
        conj.push_back(substitute(phi, to_x));
        r.payload.eq_x = xs;
        r.payload.eq_y = ys;
        r.payload.eq_w = w;
        r.payload.phi = phi;
        r.conclusion = {make_and(conj), concat(concat(xs, ys), extra), substitute(phi, to_y)};
        break;
      }
      case Rule::ConjElim:
      case Rule::DisjIntro: {
        auto ctx = context();
        auto kids = family(ctx, 1);
        std::size_t i = uniform(rng_, 0, kids.size() - 1);
        r.payload.index = i;
        if (rule == Rule::ConjElim)
          r.conclusion = {make_and(kids), ctx, kids[i]};
        else
          r.conclusion = {kids[i], ctx, make_or(kids)};
        break;
      }
      case Rule::ConjIntro: {
        auto ctx = context();
        auto phi = formula(ctx);
        auto kids = family(ctx, 0);
        for (const auto& k : kids) r.premises.push_back({phi, ctx, k});
        r.conclusion = {phi, ctx, make_and(kids)};
        break;
      }
      case Rule::DisjElim: {
        auto ctx = context();
        auto psi = formula(ctx);
        auto kids = family(ctx, 0);
        for (const auto& k : kids) r.premises.push_back({k, ctx, psi});
        r.conclusion = {make_or(kids), ctx, psi};
        break;
      }
      case Rule::ImpIntro:
      case Rule::ImpElim: {
        auto ctx = context();
        auto phi = formula(ctx), psi = formula(ctx), eta = formula(ctx);
        Sequent upper{make_and({phi, psi}), ctx, eta};
        Sequent lower{phi, ctx, make_imp(psi, eta)};
        r.premises = {rule == Rule::ImpIntro ? upper : lower};
        r.conclusion = rule == Rule::ImpIntro ? lower : upper;
        break;
      }
      case Rule::ExIntro:
      case Rule::ExElim: {
        auto x = context();
        auto y = block();
        auto phi = formula(concat(x, y)), psi = formula(x);
        Sequent upper{phi, concat(x, y), psi};
        Sequent lower{make_exists(y, phi), x, psi};
        r.premises = {rule == Rule::ExElim ? upper : lower};
        r.conclusion = rule == Rule::ExElim ? lower : upper;
        break;
      }
      case Rule::AllIntro:
      case Rule::AllElim: {
        auto x = context();
        auto y = block();
        auto phi = formula(x), psi = formula(concat(x, y));
        Sequent upper{phi, concat(x, y), psi};
        Sequent lower{phi, x, make_forall(y, psi)};
        r.premises = {rule == Rule::AllIntro ? upper : lower};
        r.conclusion = rule == Rule::AllIntro ? lower : upper;
        break;
      }
      case Rule::DualDist: {
        auto ctx = context();
        TreeFamily t = tree();
        for (const auto& a : tree_addresses(t.gamma, t.height)) t.label[a] = formula(ctx);
        Bar bar = random_bar(t);
        r.payload.tree = t;
        r.payload.bar = bar;
        r.premises = dual_dist_premises(t, ctx);
        r.conclusion = dual_dist_conclusion(t, bar, ctx);
        break;
      }
      case Rule::TransTrans: {
        TreeFamily t = tree();
        std::map<Address, Context> scope;
        for (const auto& a : tree_addresses(t.gamma, t.height)) {
          Context vars;
          if (a.empty()) {
            vars = context();
          } else {
            Address parent(a.begin(), a.end() - 1);
            auto x = uniform(rng_, 0, 1) ? block() : Context{};
            t.blocks[a] = x;
            vars = concat(scope[parent], x);
          }
          scope[a] = vars;
          t.label[a] = exact_formula(vars);
          if (a.size() < t.height) t.contexts[a] = vars;
        }
        Bar bar = random_bar(t);
        r.payload.tree = t;
        r.payload.bar = bar;
        r.premises = trans_trans_premises(t);
        r.conclusion = trans_trans_conclusion(t, bar);
        break;
      }
      case Rule::TheoryAxiom: {
        auto ctx = context();
        r.payload.axiom = "ax";
        r.conclusion = {formula(ctx), ctx, formula(ctx)};
        break;
      }
    }
    return r;
  }

private:
  static Context concat(Context a, const Context& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  std::string pick_sort() {
    std::vector<std::string> sorts;
    for (const auto& s : sig_.sorts)
      if (!sig_.constants_of(s).empty()) sorts.push_back(s);
    if (sorts.empty()) throw std::invalid_argument("random_instance: no sort has a constant");
    return sorts[uniform(rng_, 0, sorts.size() - 1)];
  }

  Var fresh(const std::string& sort) { return Var{"v" + std::to_string(next_++), sort}; }

  Context context(std::size_t min = 0) {
    Context out;
    std::size_t n = uniform(rng_, min, std::max(min, opts_.max_context));
    for (std::size_t i = 0; i < n; ++i) out.push_back(fresh(pick_sort()));
    return out;
  }

  Context block() {
    Context out;
    std::size_t n = uniform(rng_, 1, opts_.max_block);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fresh(pick_sort()));
    return out;
  }

  Formula formula(const Context& scope) { return random_formula(rng_, sig_, scope, opts_.formula); }

  // A formula whose free variables are exactly `vars`.
  Formula exact_formula(const Context& vars) {
    auto phi = formula(vars);
    auto fv = free_vars(phi);
    std::vector<Formula> conj{phi};
    for (const auto& v : vars)
      if (!fv.count(v)) conj.push_back(make_eq(make_var(v), make_var(v)));
    return conj.size() == 1 ? phi : make_and(conj);
  }

  std::vector<Formula> family(const Context& ctx, std::size_t min) {
    std::vector<Formula> out;
    std::size_t n = uniform(rng_, min, opts_.max_width);
    for (std::size_t i = 0; i < n; ++i) out.push_back(formula(ctx));
    return out;
  }

  TreeFamily tree() {
    TreeFamily t;
    t.gamma = uniform(rng_, 1, opts_.max_width);
    t.height = uniform(rng_, 1, opts_.max_height);
    return t;
  }

  Bar random_bar(const TreeFamily& t) {
    Bar bar;
    std::function<void(const Address&)> go = [&](const Address& f) {
      if (f.size() == t.height || coin(rng_, 0.3)) {
        bar.nodes.push_back(f);
        return;
      }
      for (std::size_t b = 0; b < t.gamma; ++b) {
        Address g = f;
        g.push_back(b);
        go(g);
      }
    };
    go({});
    std::shuffle(bar.nodes.begin(), bar.nodes.end(), rng_);
    return bar;
  }

  Rng& rng_;
  const Signature& sig_;
  InstanceGenOptions opts_;
  std::size_t next_ = 0;
};

}  // namespace

RuleInstance random_instance(Rng& rng, const Signature& sig, Rule rule,
                             const InstanceGenOptions& opts) {
  return InstanceGen(rng, sig, opts).make(rule);
}

}  // namespace ik
