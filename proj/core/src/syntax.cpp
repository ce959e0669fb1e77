#include "ik/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace ik {

SyntaxError::SyntaxError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------- signature

bool Signature::has_sort(const std::string& s) const {
  return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

const std::string& Signature::default_sort() const {
  static const std::string kImplicit = "S";
  return sorts.empty() ? kImplicit : sorts.front();
}

void Signature::add_sort(const std::string& s) {
  if (!has_sort(s)) sorts.push_back(s);
}

void Signature::add_relation(const std::string& name, std::vector<std::string> args) {
  if (relations.count(name) || functions.count(name))
    throw SortError("duplicate symbol '" + name + "'");
  if (args.size() >= arity_bound)
    throw SortError("relation '" + name + "' exceeds the arity bound");
  for (const auto& s : args) {
    if (!has_sort(s)) {
      if (!implicit_sorts_) throw SortError("unknown sort '" + s + "' in relation '" + name + "'");
      add_sort(s);
    }
  }
  relations.emplace(name, std::move(args));
}

void Signature::add_function(const std::string& name, std::vector<std::string> args,
                             std::string result) {
  if (relations.count(name) || functions.count(name))
    throw SortError("duplicate symbol '" + name + "'");
  if (args.size() >= arity_bound)
    throw SortError("function '" + name + "' exceeds the arity bound");
  args.push_back(result);
  for (const auto& s : args) {
    if (!has_sort(s)) {
      if (!implicit_sorts_) throw SortError("unknown sort '" + s + "' in function '" + name + "'");
      add_sort(s);
    }
  }
  args.pop_back();
  functions.emplace(name, FunDecl{std::move(args), std::move(result)});
}

bool Signature::is_constant(const std::string& name) const {
  auto it = functions.find(name);
  return it != functions.end() && it->second.args.empty();
}

std::vector<std::string> Signature::constants_of(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& [name, decl] : functions)
    if (decl.args.empty() && decl.result == sort) out.push_back(name);
  return out;
}

bool Signature::has_proper_functions() const {
  return std::any_of(functions.begin(), functions.end(),
                     [](const auto& kv) { return !kv.second.args.empty(); });
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

bool Signature::apply_declaration(std::string_view raw, std::size_t line_no) {
  std::string line = trim(raw);
  auto fail = [&](const std::string& msg) -> void { throw SyntaxError(msg, line_no, 1); };
  auto keyword_end = line.find_first_of(" \t");
  std::string kw = line.substr(0, keyword_end);
  std::string rest = keyword_end == std::string::npos ? "" : trim(line.substr(keyword_end));
  if (kw != "sort" && kw != "rel" && kw != "fun" && kw != "const") return false;

  auto check_name = [&](const std::string& n) {
    if (!valid_name(n)) fail("invalid symbol name '" + n + "'");
  };

  try {
    if (kw == "sort") {
      check_name(rest);
      if (implicit_sorts_) {
        implicit_sorts_ = false;
        if (!sorts.empty()) fail("sort declarations must precede symbol declarations");
      }
      add_sort(rest);
      return true;
    }
    auto colon = rest.find(':');
    std::string name = trim(rest.substr(0, colon));
    std::string type = colon == std::string::npos ? "" : trim(rest.substr(colon + 1));
    if (kw == "rel") {
      auto slash = name.find('/');
      if (slash != std::string::npos) {
        std::size_t n = 0;
        try {
          n = std::stoul(name.substr(slash + 1));
        } catch (const std::exception&) {
          fail("bad arity in '" + name + "'");
        }
        name = trim(name.substr(0, slash));
        check_name(name);
        add_relation(name, std::vector<std::string>(n, default_sort()));
        return true;
      }
      check_name(name);
      std::vector<std::string> args;
      if (!type.empty()) args = split_list(type, ',');
      for (auto& a : args) check_name(a);
      add_relation(name, std::move(args));
      return true;
    }
    if (kw == "const") {
      check_name(name);
      std::string sort = type.empty() ? default_sort() : type;
      check_name(sort);
      add_constant(name, sort);
      return true;
    }
    // fun f : S,T -> U
    check_name(name);
    auto arrow = type.find("->");
    if (arrow == std::string::npos) fail("function declaration needs '->'");
    std::string lhs = trim(type.substr(0, arrow));
    std::string rhs = trim(type.substr(arrow + 2));
    std::vector<std::string> args;
    if (!lhs.empty()) args = split_list(lhs, ',');
    for (auto& a : args) check_name(a);
    check_name(rhs);
    add_function(name, std::move(args), rhs);
    return true;
  } catch (const SortError& e) {
    throw SyntaxError(e.what(), line_no, 1);
  }
}

std::string Signature::to_text() const {
  std::ostringstream os;
  for (const auto& s : sorts) os << "sort " << s << "\n";
  for (const auto& [name, args] : relations) {
    os << "rel " << name;
    if (!args.empty()) {
      os << " : ";
      for (std::size_t i = 0; i < args.size(); ++i) os << (i ? "," : "") << args[i];
    }
    os << "\n";
  }
  for (const auto& [name, decl] : functions) {
    if (decl.args.empty()) {
      os << "const " << name << " : " << decl.result << "\n";
      continue;
    }
    os << "fun " << name << " : ";
    for (std::size_t i = 0; i < decl.args.size(); ++i) os << (i ? "," : "") << decl.args[i];
    os << " -> " << decl.result << "\n";
  }
  return os.str();
}

Signature parse_signature(std::string_view text) {
  Signature sig;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty() && !sig.apply_declaration(line, line_no))
      throw SyntaxError("expected a declaration", line_no, 1);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return sig;
}

// ---------------------------------------------------------------- terms

Term make_var(const Var& v) {
  return std::make_shared<const TermNode>(TermNode{TermNode::Kind::Variable, v.name, v.sort, {}});
}

Term make_var(std::string name, std::string sort) {
  return make_var(Var{std::move(name), std::move(sort)});
}

Term make_app(std::string fn, std::vector<Term> args, std::string sort) {
  return std::make_shared<const TermNode>(
      TermNode{TermNode::Kind::Apply, std::move(fn), std::move(sort), std::move(args)});
}

bool same_term(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->sort != b->sort ||
      a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_term(a->args[i], b->args[i])) return false;
  return true;
}

bool term_less(const Term& a, const Term& b) {
  if (a->kind != b->kind) return a->kind < b->kind;
  if (a->name != b->name) return a->name < b->name;
  if (a->sort != b->sort) return a->sort < b->sort;
  return std::lexicographical_compare(a->args.begin(), a->args.end(), b->args.begin(),
                                      b->args.end(), term_less);
}

std::string print_term(const Term& t) {
  if (t->kind == TermNode::Kind::Variable || t->args.empty()) return t->name;
  std::string s = t->name + "(";
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (i) s += ", ";
    s += print_term(t->args[i]);
  }
  return s + ")";
}

void term_vars(const Term& t, VarSet& out) {
  if (t->kind == TermNode::Kind::Variable) {
    out.insert(Var{t->name, t->sort});
    return;
  }
  for (const auto& a : t->args) term_vars(a, out);
}

std::string sort_of(const Term& t) { return t->sort; }

// ---------------------------------------------------------------- formulas

namespace {

Formula node(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

}  // namespace

Formula make_atom(std::string rel, std::vector<Term> args) {
  return node({Conn::Atom, std::move(rel), std::move(args), {}, {}});
}
Formula make_eq(Term lhs, Term rhs) {
  return node({Conn::Equal, {}, {std::move(lhs), std::move(rhs)}, {}, {}});
}
Formula make_top() {
  static const Formula top = node({Conn::Top, {}, {}, {}, {}});
  return top;
}
Formula make_bottom() {
  static const Formula bottom = node({Conn::Bottom, {}, {}, {}, {}});
  return bottom;
}
Formula make_and(std::vector<Formula> family) {
  return node({Conn::And, {}, {}, std::move(family), {}});
}
Formula make_or(std::vector<Formula> family) {
  return node({Conn::Or, {}, {}, std::move(family), {}});
}
Formula make_imp(Formula antecedent, Formula consequent) {
  return node({Conn::Implies, {}, {}, {std::move(antecedent), std::move(consequent)}, {}});
}
Formula make_exists(std::vector<Var> block, Formula body) {
  return node({Conn::Exists, {}, {}, {std::move(body)}, std::move(block)});
}
Formula make_forall(std::vector<Var> block, Formula body) {
  return node({Conn::Forall, {}, {}, {std::move(body)}, std::move(block)});
}

bool same(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->conn != b->conn || a->rel != b->rel || a->terms.size() != b->terms.size() ||
      a->kids.size() != b->kids.size() || a->block != b->block)
    return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!same_term(a->terms[i], b->terms[i])) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!same(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

// Bound variables are compared by binder depth.
using Binders = std::vector<Var>;

std::optional<std::size_t> binder_index(const Binders& env, const Var& v) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == v) return i;
  return std::nullopt;
}

bool alpha_term(const Term& a, const Term& b, const Binders& ea, const Binders& eb) {
  if (a->kind != b->kind || a->sort != b->sort) return false;
  if (a->kind == TermNode::Kind::Variable) {
    auto ia = binder_index(ea, Var{a->name, a->sort});
    auto ib = binder_index(eb, Var{b->name, b->sort});
    if (ia || ib) return ia == ib;
    return a->name == b->name;
  }
  if (a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!alpha_term(a->args[i], b->args[i], ea, eb)) return false;
  return true;
}

bool alpha(const Formula& a, const Formula& b, Binders& ea, Binders& eb) {
  if (a->conn != b->conn || a->rel != b->rel || a->terms.size() != b->terms.size() ||
      a->kids.size() != b->kids.size() || a->block.size() != b->block.size())
    return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!alpha_term(a->terms[i], b->terms[i], ea, eb)) return false;
  if (a->conn == Conn::Exists || a->conn == Conn::Forall) {
    for (std::size_t i = 0; i < a->block.size(); ++i)
      if (a->block[i].sort != b->block[i].sort) return false;
    ea.insert(ea.end(), a->block.begin(), a->block.end());
    eb.insert(eb.end(), b->block.begin(), b->block.end());
    bool ok = alpha(a->kids[0], b->kids[0], ea, eb);
    ea.resize(ea.size() - a->block.size());
    eb.resize(eb.size() - b->block.size());
    return ok;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!alpha(a->kids[i], b->kids[i], ea, eb)) return false;
  return true;
}

Formula normalize_schema(const Formula& f) {
  switch (f->conn) {
    case Conn::Top:
      return make_and({});
    case Conn::Bottom:
      return make_or({});
    case Conn::Atom:
    case Conn::Equal:
      return f;
    case Conn::Exists:
    case Conn::Forall: {
      auto body = normalize_schema(f->kids[0]);
      if (f->block.empty()) return body;
      return f->conn == Conn::Exists ? make_exists(f->block, body) : make_forall(f->block, body);
    }
    default: {
      FormulaNode n = *f;
      for (auto& k : n.kids) k = normalize_schema(k);
      return node(std::move(n));
    }
  }
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  Binders ea, eb;
  return alpha(a, b, ea, eb);
}

bool schema_equal(const Formula& a, const Formula& b) {
  return alpha_equal(normalize_schema(a), normalize_schema(b));
}

namespace {

void collect_free(const Formula& f, Binders& bound, VarSet& out) {
  for (const auto& t : f->terms) {
    VarSet vs;
    term_vars(t, vs);
    for (const auto& v : vs)
      if (!binder_index(bound, v)) out.insert(v);
  }
  if (f->conn == Conn::Exists || f->conn == Conn::Forall) {
    bound.insert(bound.end(), f->block.begin(), f->block.end());
    collect_free(f->kids[0], bound, out);
    bound.resize(bound.size() - f->block.size());
    return;
  }
  for (const auto& k : f->kids) collect_free(k, bound, out);
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermNode::Kind::Variable) out.insert(t->name);
  for (const auto& a : t->args) collect_names(a, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f->terms) collect_names(t, out);
  for (const auto& v : f->block) out.insert(v.name);
  for (const auto& k : f->kids) collect_names(k, out);
}

}  // namespace

VarSet free_vars(const Formula& phi) {
  VarSet out;
  Binders bound;
  collect_free(phi, bound, out);
  return out;
}

std::set<std::string> all_var_names(const Formula& phi) {
  std::set<std::string> out;
  collect_names(phi, out);
  return out;
}

std::size_t depth(const Formula& phi) {
  std::size_t d = 0;
  for (const auto& k : phi->kids) d = std::max(d, depth(k));
  return phi->kids.empty() ? 0 : d + 1;
}

// ---------------------------------------------------------------- substitution

Term substitute_term(const Term& t, const Substitution& sub) {
  if (t->kind == TermNode::Kind::Variable) {
    auto it = sub.find(Var{t->name, t->sort});
    return it == sub.end() ? t : it->second;
  }
  if (t->args.empty()) return t;
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(substitute_term(a, sub));
  return make_app(t->name, std::move(args), t->sort);
}

namespace {

std::string fresh_name(const std::set<std::string>& avoid) {
  for (std::size_t i = 0;; ++i) {
    std::string n = std::string(kReservedPrefix) + "v" + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

}  // namespace

Formula substitute(const Formula& phi, const Substitution& sub) {
  if (sub.empty()) return phi;
  switch (phi->conn) {
    case Conn::Top:
    case Conn::Bottom:
      return phi;
    case Conn::Atom:
    case Conn::Equal: {
      FormulaNode n = *phi;
      for (auto& t : n.terms) t = substitute_term(t, sub);
      return node(std::move(n));
    }
    case Conn::And:
    case Conn::Or:
    case Conn::Implies: {
      FormulaNode n = *phi;
      for (auto& k : n.kids) k = substitute(k, sub);
      return node(std::move(n));
    }
    case Conn::Exists:
    case Conn::Forall:
      break;
  }

  const Formula& body = phi->kids[0];
  VarSet body_free = free_vars(body);
  Substitution inner;
  std::set<std::string> range_names;
  for (const auto& [v, t] : sub) {
    if (std::find(phi->block.begin(), phi->block.end(), v) != phi->block.end()) continue;
    if (!body_free.count(v)) continue;
    inner.emplace(v, t);
    std::set<std::string> names;
    collect_names(t, names);
    range_names.insert(names.begin(), names.end());
  }
  if (inner.empty()) return phi;

  std::set<std::string> avoid = all_var_names(body);
  avoid.insert(range_names.begin(), range_names.end());
  for (const auto& v : phi->block) avoid.insert(v.name);
  for (const auto& [v, t] : sub) avoid.insert(v.name);

  std::vector<Var> block = phi->block;
  for (auto& b : block) {
    if (!range_names.count(b.name)) continue;
    Var renamed{fresh_name(avoid), b.sort};
    avoid.insert(renamed.name);
    inner[b] = make_var(renamed);
    b = renamed;
  }
  Formula new_body = substitute(body, inner);
  return phi->conn == Conn::Exists ? make_exists(std::move(block), std::move(new_body))
                                   : make_forall(std::move(block), std::move(new_body));
}

// ---------------------------------------------------------------- checking

namespace {

void check_term(const Signature& sig, const Term& t) {
  if (t->kind == TermNode::Kind::Variable) {
    if (!sig.has_sort(t->sort))
      throw SortError("variable '" + t->name + "' has unknown sort '" + t->sort + "'");
    return;
  }
  auto it = sig.functions.find(t->name);
  if (it == sig.functions.end()) throw SortError("unknown function symbol '" + t->name + "'");
  const FunDecl& d = it->second;
  if (d.args.size() != t->args.size())
    throw SortError("function '" + t->name + "' expects " + std::to_string(d.args.size()) +
                    " arguments");
  if (d.result != t->sort) throw SortError("function '" + t->name + "' has wrong result sort");
  for (std::size_t i = 0; i < d.args.size(); ++i) {
    check_term(sig, t->args[i]);
    if (t->args[i]->sort != d.args[i])
      throw SortError("argument " + std::to_string(i) + " of '" + t->name + "' has sort '" +
                      t->args[i]->sort + "', expected '" + d.args[i] + "'");
  }
}

}  // namespace

void check_formula(const Signature& sig, const Formula& phi) {
  switch (phi->conn) {
    case Conn::Top:
    case Conn::Bottom:
      return;
    case Conn::Atom: {
      auto it = sig.relations.find(phi->rel);
      if (it == sig.relations.end()) throw SortError("unknown relation symbol '" + phi->rel + "'");
      if (it->second.size() != phi->terms.size())
        throw SortError("relation '" + phi->rel + "' expects " +
                        std::to_string(it->second.size()) + " arguments");
      for (std::size_t i = 0; i < phi->terms.size(); ++i) {
        check_term(sig, phi->terms[i]);
        if (phi->terms[i]->sort != it->second[i])
          throw SortError("argument " + std::to_string(i) + " of '" + phi->rel +
                          "' has sort '" + phi->terms[i]->sort + "', expected '" +
                          it->second[i] + "'");
      }
      return;
    }
    case Conn::Equal:
      check_term(sig, phi->terms[0]);
      check_term(sig, phi->terms[1]);
      if (phi->terms[0]->sort != phi->terms[1]->sort)
        throw SortError("equality between sorts '" + phi->terms[0]->sort + "' and '" +
                        phi->terms[1]->sort + "'");
      return;
    case Conn::And:
    case Conn::Or:
      if (phi->kids.size() > sig.conn_bound)
        throw SortError("connective width " + std::to_string(phi->kids.size()) +
                        " exceeds the bound " + std::to_string(sig.conn_bound));
      for (const auto& k : phi->kids) check_formula(sig, k);
      return;
    case Conn::Implies:
      check_formula(sig, phi->kids[0]);
      check_formula(sig, phi->kids[1]);
      return;
    case Conn::Exists:
    case Conn::Forall: {
      if (phi->block.size() >= sig.arity_bound)
        throw SortError("quantifier block exceeds the arity bound");
      std::set<std::string> seen;
      for (const auto& v : phi->block) {
        if (!sig.has_sort(v.sort)) throw SortError("unknown sort '" + v.sort + "'");
        if (!seen.insert(v.name).second)
          throw SortError("variable '" + v.name + "' repeated in quantifier block");
      }
      check_formula(sig, phi->kids[0]);
      return;
    }
  }
}

bool same_sequent(const Sequent& a, const Sequent& b) {
  return a.context == b.context && same(a.antecedent, b.antecedent) &&
         same(a.succedent, b.succedent);
}

bool schema_equal(const Sequent& a, const Sequent& b) {
  return a.context == b.context && schema_equal(a.antecedent, b.antecedent) &&
         schema_equal(a.succedent, b.succedent);
}

void check_sequent(const Signature& sig, const Sequent& s) {
  check_formula(sig, s.antecedent);
  check_formula(sig, s.succedent);
  std::set<std::string> names;
  for (const auto& v : s.context) {
    if (!sig.has_sort(v.sort)) throw SortError("unknown sort '" + v.sort + "'");
    if (!names.insert(v.name).second)
      throw SortError("variable '" + v.name + "' repeated in context");
  }
  VarSet ctx(s.context.begin(), s.context.end());
  for (const auto& side : {s.antecedent, s.succedent})
    for (const auto& v : free_vars(side))
      if (!ctx.count(v)) throw SortError("free variable '" + v.name + "' missing from context");
}

// ---------------------------------------------------------------- printing

std::string print_context(const Context& ctx) {
  std::string s = "[";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) s += ", ";
    s += ctx[i].name + ":" + ctx[i].sort;
  }
  return s + "]";
}

std::string print(const Formula& phi) {
  auto family = [](const char* head, const std::vector<Formula>& kids) {
    std::string s = std::string(head) + "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) s += ", ";
      s += print(kids[i]);
    }
    return s + ")";
  };
  switch (phi->conn) {
    case Conn::Top:
      return "true";
    case Conn::Bottom:
      return "false";
    case Conn::Atom: {
      if (phi->terms.empty()) return phi->rel;
      std::string s = phi->rel + "(";
      for (std::size_t i = 0; i < phi->terms.size(); ++i) {
        if (i) s += ", ";
        s += print_term(phi->terms[i]);
      }
      return s + ")";
    }
    case Conn::Equal:
      return "eq(" + print_term(phi->terms[0]) + ", " + print_term(phi->terms[1]) + ")";
    case Conn::And:
      return family("and", phi->kids);
    case Conn::Or:
      return family("or", phi->kids);
    case Conn::Implies:
      return family("imp", phi->kids);
    case Conn::Exists:
      return "ex(" + print_context(phi->block) + ", " + print(phi->kids[0]) + ")";
    case Conn::Forall:
      return "all(" + print_context(phi->block) + ", " + print(phi->kids[0]) + ")";
  }
  return {};
}

std::string print(const Sequent& s) {
  return print(s.antecedent) + " |- " + print_context(s.context) + " " + print(s.succedent);
}

}  // namespace ik
