#include "ik/saturate.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "ik/lexer.hpp"
#include "ik/text_io.hpp"

namespace ik {

SaturateLimits limits_from_env(SaturateLimits base) {
  if (const char* v = std::getenv("IK_RESOURCE_LIMIT")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) base.nodes = n;
  }
  return base;
}

bool is_coherent(const Formula& phi) {
  if (phi->conn == Conn::Implies || phi->conn == Conn::Forall) return false;
  return std::all_of(phi->kids.begin(), phi->kids.end(),
                     [](const Formula& k) { return is_coherent(k); });
}

bool is_coherent(const Sequent& s) { return is_coherent(s.antecedent) && is_coherent(s.succedent); }

// ---------------------------------------------------------------- theory files

TheoryFile parse_theory_file(std::string_view text, ParseOptions opts) {
  TheoryFile t;
  bool header = true;
  for (const auto& line : content_lines(text)) {
    if (header && t.sig.apply_declaration(line.text, line.number)) continue;
    header = false;
    Lexer lex(line.text, line.number, 1);
    Token name = lex.expect(Tok::Ident, "axiom name");
    lex.expect(Tok::Colon, "after axiom name");
    for (const auto& a : t.axioms)
      if (a.name == name.text) lex.fail_at(name, "duplicate axiom '" + name.text + "'");
    FormulaReader reader(lex, t.sig, opts);
    Sequent s = reader.sequent();
    if (!lex.at_end()) lex.fail("unexpected text after sequent");
    try {
      check_sequent(t.sig, s);
    } catch (const SortError& e) {
      throw SyntaxError(e.what(), line.number, 1);
    }
    t.axioms.push_back({name.text, std::move(s)});
  }
  return t;
}

std::string write_theory(const TheoryFile& t) {
  std::string out = t.sig.to_text();
  for (const auto& a : t.axioms) out += a.name + ": " + print(a.sequent) + "\n";
  return out;
}

void check_coherent_theory(const TheoryFile& t) {
  if (t.sig.has_proper_functions())
    throw SortError("coherent theories may use constants only");
  for (const auto& a : t.axioms) {
    check_sequent(t.sig, a.sequent);
    if (!is_coherent(a.sequent)) throw SortError("axiom '" + a.name + "' is not coherent");
  }
}

// ---------------------------------------------------------------- Herbrand base

namespace {

void tuples(const Signature& sig, const std::vector<std::string>& sorts, std::size_t i,
            std::vector<std::string>& cur, const std::function<void()>& emit) {
  if (i == sorts.size()) {
    emit();
    return;
  }
  for (const auto& c : sig.constants_of(sorts[i])) {
    cur.push_back(c);
    tuples(sig, sorts, i + 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

HerbrandBase::HerbrandBase(const Signature& sig) : sig_(sig) {
  if (sig.has_proper_functions()) throw SortError("Herbrand structures need constants only");
  for (const auto& [rel, sorts] : sig.relations) {
    std::vector<std::string> cur;
    tuples(sig, sorts, 0, cur, [&] {
      index_[GroundAtom{rel, cur}] = atoms_.size();
      atoms_.push_back(GroundAtom{rel, cur});
    });
  }
}

std::optional<std::size_t> HerbrandBase::find(const GroundAtom& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Grounding> groundings(const Signature& sig, const Context& ctx) {
  std::vector<Grounding> out{Grounding{}};
  for (const auto& v : ctx) {
    std::vector<Grounding> next;
    for (const auto& g : out)
      for (const auto& c : sig.constants_of(v.sort)) {
        auto h = g;
        h[v] = c;
        next.push_back(std::move(h));
      }
    out = std::move(next);
  }
  return out;
}

std::string constant_of(const Term& t, const Grounding& g) {
  if (t->kind == TermNode::Kind::Apply) {
    if (!t->args.empty()) throw SortError("function symbol '" + t->name + "' in a Herbrand term");
    return t->name;
  }
  auto it = g.find(Var{t->name, t->sort});
  if (it == g.end()) throw std::invalid_argument("unbound variable '" + t->name + "'");
  return it->second;
}

namespace {

GroundAtom ground(const Formula& atom, const Grounding& g) {
  GroundAtom a{atom->rel, {}};
  for (const auto& t : atom->terms) a.args.push_back(constant_of(t, g));
  return a;
}

template <class F>
bool any_grounding(const Signature& sig, const Context& block, const Grounding& g, F f) {
  for (auto h : groundings(sig, block)) {
    for (const auto& [v, c] : g)
      if (!h.count(v)) h[v] = c;
    if (f(h)) return true;
  }
  return false;
}

}  // namespace

bool evaluate(const HerbrandBase& base, const AtomSet& m, const Formula& phi, const Grounding& g) {
  switch (phi->conn) {
    case Conn::Atom: {
      auto i = base.find(ground(phi, g));
      if (!i) throw SortError("atom " + print(phi) + " is outside the Herbrand base");
      return m[*i];
    }
    case Conn::Equal:
      return constant_of(phi->terms[0], g) == constant_of(phi->terms[1], g);
    case Conn::Top:
      return true;
    case Conn::Bottom:
      return false;
    case Conn::And:
      return std::all_of(phi->kids.begin(), phi->kids.end(),
                         [&](const Formula& k) { return evaluate(base, m, k, g); });
    case Conn::Or:
      return std::any_of(phi->kids.begin(), phi->kids.end(),
                         [&](const Formula& k) { return evaluate(base, m, k, g); });
    case Conn::Implies:
      return !evaluate(base, m, phi->kids[0], g) || evaluate(base, m, phi->kids[1], g);
    case Conn::Exists:
      return any_grounding(base.sig(), phi->block, g,
                           [&](const Grounding& h) { return evaluate(base, m, phi->kids[0], h); });
    case Conn::Forall:
      return !any_grounding(base.sig(), phi->block, g, [&](const Grounding& h) {
        return !evaluate(base, m, phi->kids[0], h);
      });
  }
  return false;
}

bool satisfies(const HerbrandBase& base, const AtomSet& m, const Sequent& s) {
  for (const auto& g : groundings(base.sig(), s.context))
    if (evaluate(base, m, s.antecedent, g) && !evaluate(base, m, s.succedent, g)) return false;
  return true;
}

bool satisfies(const HerbrandBase& base, const AtomSet& m, const Theory& t) {
  return std::all_of(t.begin(), t.end(),
                     [&](const NamedSequent& a) { return satisfies(base, m, a.sequent); });
}

std::string print_model(const HerbrandBase& base, const AtomSet& m) {
  std::vector<std::string> items;
  for (auto i = m.find_first(); i != AtomSet::npos; i = m.find_next(i)) {
    const auto& a = base.atom(i);
    std::string s = a.rel;
    if (!a.args.empty()) {
      s += "(";
      for (std::size_t k = 0; k < a.args.size(); ++k) s += (k ? ", " : "") + a.args[k];
      s += ")";
    }
    items.push_back(s);
  }
  std::sort(items.begin(), items.end());
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

// ---------------------------------------------------------------- normal forms

namespace {

// Drops sets that contain another set of the list.
void minimize(std::vector<AtomSet>& v) {
  std::sort(v.begin(), v.end(), [](const AtomSet& a, const AtomSet& b) {
    return a.count() != b.count() ? a.count() < b.count() : a < b;
  });
  std::vector<AtomSet> out;
  for (const auto& s : v)
    if (std::none_of(out.begin(), out.end(), [&](const AtomSet& o) { return o.is_subset_of(s); }))
      out.push_back(s);
  v = std::move(out);
}

}  // namespace

std::vector<AtomSet> ground_dnf(const HerbrandBase& base, const Formula& phi, const Grounding& g,
                                std::size_t budget) {
  auto check = [&](std::size_t n) {
    if (n > budget) throw ResourceError("normal form exceeds " + std::to_string(budget) + " terms");
  };
  switch (phi->conn) {
    case Conn::Atom: {
      auto i = base.find(ground(phi, g));
      if (!i) throw SortError("atom " + print(phi) + " is outside the Herbrand base");
      AtomSet s = base.empty();
      s[*i] = true;
      return {s};
    }
    case Conn::Equal:
      if (constant_of(phi->terms[0], g) == constant_of(phi->terms[1], g)) return {base.empty()};
      return {};
    case Conn::Top:
      return {base.empty()};
    case Conn::Bottom:
      return {};
    case Conn::And: {
      std::vector<AtomSet> acc{base.empty()};
      for (const auto& k : phi->kids) {
        auto d = ground_dnf(base, k, g, budget);
        std::vector<AtomSet> next;
        check(acc.size() * d.size());
        for (const auto& a : acc)
          for (const auto& b : d) next.push_back(a | b);
        minimize(next);
        acc = std::move(next);
      }
      return acc;
    }
    case Conn::Or: {
      std::vector<AtomSet> acc;
      for (const auto& k : phi->kids) {
        auto d = ground_dnf(base, k, g, budget);
        acc.insert(acc.end(), d.begin(), d.end());
        check(acc.size());
      }
      minimize(acc);
      return acc;
    }
    case Conn::Exists: {
      std::vector<AtomSet> acc;
      any_grounding(base.sig(), phi->block, g, [&](const Grounding& h) {
        auto d = ground_dnf(base, phi->kids[0], h, budget);
        acc.insert(acc.end(), d.begin(), d.end());
        check(acc.size());
        return false;
      });
      minimize(acc);
      return acc;
    }
    default:
      throw std::invalid_argument("not coherent: " + print(phi));
  }
}

// ---------------------------------------------------------------- model search

namespace {

// Ground instance of a coherent sequent: if some `when` set holds, some
// `then` set must hold.
struct Rule {
  std::vector<AtomSet> when;
  std::vector<AtomSet> then;
};

std::vector<Rule> ground_rules(const HerbrandBase& base, const Theory& t) {
  std::vector<Rule> out;
  for (const auto& a : t)
    for (const auto& g : groundings(base.sig(), a.sequent.context)) {
      Rule r{ground_dnf(base, a.sequent.antecedent, g), ground_dnf(base, a.sequent.succedent, g)};
      if (r.when.empty()) continue;
      // Instances whose conclusion holds outright are vacuous.
      if (std::any_of(r.then.begin(), r.then.end(), [](const AtomSet& s) { return s.none(); }))
        continue;
      out.push_back(std::move(r));
    }
  return out;
}

bool holds_in(const std::vector<AtomSet>& dnf, const AtomSet& m) {
  return std::any_of(dnf.begin(), dnf.end(), [&](const AtomSet& s) { return s.is_subset_of(m); });
}

class ModelSearch {
public:
  ModelSearch(const HerbrandBase& base, std::vector<Rule> rules, const SaturateLimits& lim)
      : n_(base.size()), rules_(std::move(rules)), lim_(lim) {}

  std::vector<AtomSet> run() {
    AtomSet yes(n_), no(n_);
    search(yes, no);
    std::sort(out_.begin(), out_.end());
    return out_;
  }

private:
  enum class Status { Ok, Conflict };

  // A `then` set is dead once one of its atoms is false.
  Status propagate(AtomSet& yes, AtomSet& no) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules_) {
        bool fired = false;
        for (const auto& w : r.when)
          if (w.is_subset_of(yes)) fired = true;
        std::vector<const AtomSet*> live;
        for (const auto& t : r.then)
          if (!t.intersects(no)) live.push_back(&t);
        if (fired) {
          if (live.empty()) return Status::Conflict;
          if (live.size() == 1 && !live[0]->is_subset_of(yes)) {
            yes |= *live[0];
            if (yes.intersects(no)) return Status::Conflict;
            changed = true;
          }
        } else if (live.empty()) {
          // Every `when` set must stay false; force the last open atom of each.
          for (const auto& w : r.when) {
            if (w.intersects(no)) continue;
            AtomSet open = w - yes;
            if (open.count() == 1) {
              no |= open;
              changed = true;
            }
          }
        }
      }
    }
    return Status::Ok;
  }

  void search(AtomSet yes, AtomSet no) {
    if (++nodes_ > lim_.nodes) throw ResourceError("model search exceeded the node bound");
    if (propagate(yes, no) == Status::Conflict) return;
    AtomSet decided = yes | no;
    auto free = (~decided).find_first();
    if (free == AtomSet::npos) {
      if (out_.size() >= lim_.max_worlds)
        throw ResourceError("more than " + std::to_string(lim_.max_worlds) + " models");
      out_.push_back(yes);
      return;
    }
    auto y = yes;
    y[free] = true;
    search(y, no);
    auto n = no;
    n[free] = true;
    search(yes, n);
  }

  std::size_t n_;
  std::vector<Rule> rules_;
  const SaturateLimits& lim_;
  std::size_t nodes_ = 0;
  std::vector<AtomSet> out_;
};

}  // namespace

std::vector<AtomSet> herbrand_models(const HerbrandBase& base, const Theory& t,
                                     const SaturateLimits& lim) {
  return ModelSearch(base, ground_rules(base, t), lim).run();
}

// ---------------------------------------------------------------- entailment

bool entails_by_enumeration(const HerbrandBase& base, const Theory& t, const Sequent& s,
                            const SaturateLimits& lim) {
  const std::size_t n = base.size();
  if (n > lim.max_atoms || n >= 32)
    throw ResourceError(std::to_string(n) + " ground atoms are too many to enumerate");
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    AtomSet m(n, mask);
    if (satisfies(base, m, t) && !satisfies(base, m, s)) return false;
  }
  return true;
}

namespace {

class Chase {
public:
  Chase(std::vector<Rule> rules, const SaturateLimits& lim) : rules_(std::move(rules)), lim_(lim) {}

  // True if every model of the rules containing `facts` satisfies `goal`;
  // otherwise `witness` is a model that does not.
  bool closes(const AtomSet& facts, const std::vector<AtomSet>& goal, AtomSet& witness) {
    if (++nodes_ > lim_.nodes) throw ResourceError("chase exceeded the node bound");
    if (holds_in(goal, facts)) return true;
    for (const auto& r : rules_) {
      if (!holds_in(r.when, facts) || holds_in(r.then, facts)) continue;
      for (const auto& t : r.then)
        if (!closes(facts | t, goal, witness)) return false;
      return true;
    }
    witness = facts;
    return false;
  }

private:
  std::vector<Rule> rules_;
  const SaturateLimits& lim_;
  std::size_t nodes_ = 0;
};

}  // namespace

bool entails_by_chase(const HerbrandBase& base, const Theory& t, const Sequent& s,
                      const SaturateLimits& lim, Grounding* where, AtomSet* model) {
  Chase chase(ground_rules(base, t), lim);
  for (const auto& g : groundings(base.sig(), s.context)) {
    auto goal = ground_dnf(base, s.succedent, g);
    for (const auto& start : ground_dnf(base, s.antecedent, g)) {
      AtomSet witness;
      if (chase.closes(start, goal, witness)) continue;
      if (where) *where = g;
      if (model) *model = witness;
      return false;
    }
  }
  return true;
}

bool entails(const TheoryFile& t, const Sequent& s, const SaturateLimits& lim) {
  if (!is_coherent(s)) throw std::invalid_argument("entails: the sequent is not coherent");
  HerbrandBase base(t.sig);
  bool chased = entails_by_chase(base, t.axioms, s, lim);
  bool enumerated = entails_by_enumeration(base, t.axioms, s, lim);
  if (chased != enumerated)
    throw std::logic_error("entailment procedures disagree on " + print(s));
  return chased;
}

}  // namespace ik
