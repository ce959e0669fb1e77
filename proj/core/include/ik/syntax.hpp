#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ik {

/// Raised for malformed input text. Carries a 1-based line and column.
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when a formula, term or substitution does not respect sorts or bounds.
class SortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Var {
  std::string name;
  std::string sort;
  auto operator<=>(const Var&) const = default;
};

using Context = std::vector<Var>;
using VarSet = std::set<Var>;

// Names with this prefix are reserved for generated variables and predicates.
inline constexpr std::string_view kReservedPrefix = "_";

struct FunDecl {
  std::vector<std::string> args;
  std::string result;
};

class Signature {
public:
  std::vector<std::string> sorts;
  std::map<std::string, std::vector<std::string>> relations;
  std::map<std::string, FunDecl> functions;  // constants are 0-ary
  std::size_t arity_bound = 8;               // stand-in for kappa
  std::size_t conn_bound = 8;                // stand-in for kappa^+

  bool has_sort(const std::string& s) const;
  const std::string& default_sort() const;
  void add_sort(const std::string& s);
  void add_relation(const std::string& name, std::vector<std::string> args);
  void add_function(const std::string& name, std::vector<std::string> args, std::string result);
  void add_constant(const std::string& name, const std::string& sort) { add_function(name, {}, sort); }

  bool is_constant(const std::string& name) const;
  std::vector<std::string> constants_of(const std::string& sort) const;
  bool has_proper_functions() const;

  /// Applies one declaration line (`sort S`, `rel R : S,S`, `rel P/2`,
  /// `fun f : S -> S`, `const c : S`). Returns false if the line is not a
  /// declaration.
  bool apply_declaration(std::string_view line, std::size_t line_no = 1);
  std::string to_text() const;

private:
  bool implicit_sorts_ = true;
};

Signature parse_signature(std::string_view text);

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Variable, Apply };
  Kind kind;
  std::string name;
  std::string sort;
  std::vector<Term> args;
};

Term make_var(const Var& v);
Term make_var(std::string name, std::string sort);
Term make_app(std::string fn, std::vector<Term> args, std::string sort);

bool same_term(const Term& a, const Term& b);
bool term_less(const Term& a, const Term& b);
std::string print_term(const Term& t);
void term_vars(const Term& t, VarSet& out);

enum class Conn { Atom, Equal, Top, Bottom, And, Or, Implies, Exists, Forall };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Conn conn;
  std::string rel;             // Atom
  std::vector<Term> terms;     // Atom arguments, or the two sides of Equal
  std::vector<Formula> kids;   // And/Or family, Implies (2), quantifier body (1)
  std::vector<Var> block;      // quantified variables
};

Formula make_atom(std::string rel, std::vector<Term> args);
Formula make_eq(Term lhs, Term rhs);
Formula make_top();
Formula make_bottom();
Formula make_and(std::vector<Formula> family);
Formula make_or(std::vector<Formula> family);
Formula make_imp(Formula antecedent, Formula consequent);
Formula make_exists(std::vector<Var> block, Formula body);
Formula make_forall(std::vector<Var> block, Formula body);

/// Structural identity, bound names included.
bool same(const Formula& a, const Formula& b);
/// Identity up to renaming of bound variables.
bool alpha_equal(const Formula& a, const Formula& b);
/// Alpha-equality that also identifies `true` with `and()`, `false` with
/// `or()`, and quantification over an empty block with its body. This is the
/// identity used when matching rule schemata.
bool schema_equal(const Formula& a, const Formula& b);

VarSet free_vars(const Formula& phi);
/// Every variable name occurring anywhere (free or bound).
std::set<std::string> all_var_names(const Formula& phi);
std::size_t depth(const Formula& phi);

using Substitution = std::map<Var, Term>;

/// Capture-avoiding simultaneous substitution. Bound variables that would
/// capture a variable of the substituted terms are renamed to the reserved
/// namespace (`_v0`, `_v1`, ...), choosing the least unused index.
Formula substitute(const Formula& phi, const Substitution& sub);
Term substitute_term(const Term& t, const Substitution& sub);

std::string sort_of(const Term& t);

/// Checks sorts, arities, connective width and block bounds against `sig`.
/// Throws SortError naming the offending symbol.
void check_formula(const Signature& sig, const Formula& phi);

struct Sequent {
  Formula antecedent;
  Context context;
  Formula succedent;
};

bool same_sequent(const Sequent& a, const Sequent& b);
bool schema_equal(const Sequent& a, const Sequent& b);
/// Throws SortError if the context repeats a variable or misses a free
/// variable of either side.
void check_sequent(const Signature& sig, const Sequent& s);

std::string print(const Formula& phi);
std::string print(const Sequent& s);
std::string print_context(const Context& ctx);

struct ParseOptions {
  bool allow_reserved = false;
};

Formula parse_formula(std::string_view text, const Signature& sig,
                      const Context& known = {}, ParseOptions opts = {});
Sequent parse_sequent(std::string_view text, const Signature& sig, ParseOptions opts = {});
Term parse_term(std::string_view text, const Signature& sig, const Context& known = {},
                ParseOptions opts = {});
Context parse_context(std::string_view text, const Signature& sig, ParseOptions opts = {});

}  // namespace ik
