#include "ik/lexer.hpp"

#include <cctype>

namespace ik {

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Arrow: return "'->'";
    case Tok::Assign: return "':='";
    case Tok::Equals: return "'='";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::LessEq: return "'<='";
    case Tok::End: return "end of input";
  }
  return "?";
}

Lexer::Lexer(std::string_view text, std::size_t line, std::size_t column)
    : text_(text), line_(line), column_(column) {}

void Lexer::skip_space() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (c == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) break;
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
}

Token Lexer::scan() {
  skip_space();
  Token tok;
  tok.line = line_;
  tok.column = column_;
  if (pos_ >= text_.size()) return tok;

  auto take = [&](Tok kind, std::size_t n) {
    tok.kind = kind;
    tok.text = std::string(text_.substr(pos_, n));
    pos_ += n;
    column_ += n;
    return tok;
  };
  auto next_is = [&](char c) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == c; };

  char c = text_[pos_];
  auto ident_char = [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
  };
  if (ident_char(c)) {
    std::size_t n = 0;
    while (pos_ + n < text_.size() && ident_char(text_[pos_ + n])) ++n;
    return take(Tok::Ident, n);
  }
  switch (c) {
    case '(': return take(Tok::LParen, 1);
    case ')': return take(Tok::RParen, 1);
    case '[': return take(Tok::LBrack, 1);
    case ']': return take(Tok::RBrack, 1);
    case '{': return take(Tok::LBrace, 1);
    case '}': return take(Tok::RBrace, 1);
    case ',': return take(Tok::Comma, 1);
    case ';': return take(Tok::Semi, 1);
    case '=': return take(Tok::Equals, 1);
    case '>': return take(Tok::Greater, 1);
    case ':': return next_is('=') ? take(Tok::Assign, 2) : take(Tok::Colon, 1);
    case '<': return next_is('=') ? take(Tok::LessEq, 2) : take(Tok::Less, 1);
    case '|':
      if (next_is('-')) return take(Tok::Turnstile, 2);
      break;
    case '-':
      if (next_is('>')) return take(Tok::Arrow, 2);
      break;
    default:
      break;
  }
  throw SyntaxError(std::string("unexpected character '") + c + "'", line_, column_);
}

const Token& Lexer::peek() {
  if (!lookahead_) lookahead_ = scan();
  return *lookahead_;
}

Token Lexer::next() {
  Token t = peek();
  lookahead_.reset();
  return t;
}

bool Lexer::accept(Tok kind) {
  if (peek().kind != kind) return false;
  next();
  return true;
}

Token Lexer::expect(Tok kind, std::string_view what) {
  const Token& t = peek();
  if (t.kind != kind) {
    std::string msg = std::string("expected ") + describe(kind);
    if (!what.empty()) msg += " " + std::string(what);
    msg += ", found " + (t.kind == Tok::End ? std::string(describe(Tok::End)) : "'" + t.text + "'");
    fail_at(t, msg);
  }
  return next();
}

void Lexer::fail(const std::string& msg) { fail_at(peek(), msg); }

void Lexer::fail_at(const Token& tok, const std::string& msg) {
  throw SyntaxError(msg, tok.line, tok.column);
}

// ---------------------------------------------------------------- reader

namespace {

bool is_keyword(const std::string& s) {
  return s == "true" || s == "false" || s == "and" || s == "or" || s == "imp" || s == "ex" ||
         s == "all" || s == "eq";
}

[[noreturn]] void sort_fail(const Token& tok, const std::string& msg) {
  throw SortError(std::to_string(tok.line) + ":" + std::to_string(tok.column) + ": " + msg);
}

}  // namespace

FormulaReader::FormulaReader(Lexer& lex, const Signature& sig, ParseOptions opts)
    : lex_(lex), sig_(sig), opts_(opts) {}

void FormulaReader::declare(const Var& v) { free_[v.name] = v.sort; }

std::string FormulaReader::identifier(std::string_view what) {
  Token t = lex_.expect(Tok::Ident, what);
  if (!opts_.allow_reserved && t.text.starts_with(kReservedPrefix))
    lex_.fail_at(t, "names starting with '" + std::string(kReservedPrefix) + "' are reserved");
  return t.text;
}

Context FormulaReader::context() {
  Context ctx;
  lex_.expect(Tok::LBrack, "to open a variable list");
  if (lex_.accept(Tok::RBrack)) return ctx;
  do {
    Token tok = lex_.peek();
    std::string name = identifier("(variable name)");
    if (is_keyword(name) || sig_.functions.count(name))
      sort_fail(tok, "'" + name + "' cannot be used as a variable");
    std::string sort = sig_.default_sort();
    if (lex_.accept(Tok::Colon)) {
      Token st = lex_.peek();
      sort = identifier("(sort name)");
      if (!sig_.has_sort(sort)) sort_fail(st, "unknown sort '" + sort + "'");
    }
    for (const auto& v : ctx)
      if (v.name == name) sort_fail(tok, "variable '" + name + "' repeated");
    ctx.push_back(Var{name, sort});
  } while (lex_.accept(Tok::Comma));
  lex_.expect(Tok::RBrack, "to close a variable list");
  return ctx;
}

Term FormulaReader::variable_or_constant(const Token& tok, const std::string* expected) {
  const std::string& name = tok.text;
  for (std::size_t i = bound_.size(); i-- > 0;) {
    if (bound_[i].name == name) {
      if (expected && *expected != bound_[i].sort)
        sort_fail(tok, "variable '" + name + "' has sort '" + bound_[i].sort + "', expected '" +
                           *expected + "'");
      return make_var(bound_[i]);
    }
  }
  if (auto it = sig_.functions.find(name); it != sig_.functions.end()) {
    if (!it->second.args.empty())
      sort_fail(tok, "function '" + name + "' needs " + std::to_string(it->second.args.size()) +
                         " arguments");
    if (expected && *expected != it->second.result)
      sort_fail(tok, "constant '" + name + "' has sort '" + it->second.result + "', expected '" +
                         *expected + "'");
    return make_app(name, {}, it->second.result);
  }
  if (is_keyword(name)) sort_fail(tok, "keyword '" + name + "' used as a term");
  if (auto it = free_.find(name); it != free_.end()) {
    if (expected && *expected != it->second)
      sort_fail(tok, "variable '" + name + "' used at sorts '" + it->second + "' and '" +
                         *expected + "'");
    return make_var(name, it->second);
  }
  std::string sort = expected ? *expected : sig_.default_sort();
  if (!sig_.has_sort(sort)) sort_fail(tok, "unknown sort '" + sort + "'");
  free_[name] = sort;
  return make_var(name, sort);
}

Term FormulaReader::term(const std::string* expected) {
  Token tok = lex_.peek();
  std::string name = identifier("(term)");
  if (!lex_.accept(Tok::LParen)) return variable_or_constant(tok, expected);
  auto it = sig_.functions.find(name);
  if (it == sig_.functions.end()) sort_fail(tok, "unknown function symbol '" + name + "'");
  const FunDecl& decl = it->second;
  std::vector<Term> args;
  if (!lex_.accept(Tok::RParen)) {
    do {
      if (args.size() >= decl.args.size())
        sort_fail(tok, "too many arguments for '" + name + "'");
      args.push_back(term(&decl.args[args.size()]));
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "after function arguments");
  }
  if (args.size() != decl.args.size())
    sort_fail(tok, "function '" + name + "' expects " + std::to_string(decl.args.size()) +
                       " arguments");
  if (expected && *expected != decl.result)
    sort_fail(tok, "'" + name + "' has sort '" + decl.result + "', expected '" + *expected + "'");
  return make_app(name, std::move(args), decl.result);
}

Formula FormulaReader::family(Conn conn) {
  std::vector<Formula> kids;
  lex_.expect(Tok::LParen);
  if (!lex_.accept(Tok::RParen)) {
    do {
      kids.push_back(formula());
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "to close the family");
  }
  return conn == Conn::And ? make_and(std::move(kids)) : make_or(std::move(kids));
}

Formula FormulaReader::quantified(Conn conn) {
  lex_.expect(Tok::LParen);
  Context block = context();
  lex_.expect(Tok::Comma, "after the quantifier block");
  bound_.insert(bound_.end(), block.begin(), block.end());
  Formula body = formula();
  bound_.resize(bound_.size() - block.size());
  lex_.expect(Tok::RParen, "to close the quantifier");
  return conn == Conn::Exists ? make_exists(std::move(block), std::move(body))
                              : make_forall(std::move(block), std::move(body));
}

Formula FormulaReader::formula() {
  Token tok = lex_.peek();
  if (tok.kind != Tok::Ident) lex_.fail_at(tok, "expected a formula");
  const std::string& w = tok.text;
  if (w == "true" || w == "false") {
    lex_.next();
    return w == "true" ? make_top() : make_bottom();
  }
  if (w == "and" || w == "or") {
    lex_.next();
    return family(w == "and" ? Conn::And : Conn::Or);
  }
  if (w == "imp") {
    lex_.next();
    lex_.expect(Tok::LParen);
    Formula a = formula();
    lex_.expect(Tok::Comma, "between implication sides");
    Formula b = formula();
    lex_.expect(Tok::RParen, "to close the implication");
    return make_imp(std::move(a), std::move(b));
  }
  if (w == "ex" || w == "all") {
    lex_.next();
    return quantified(w == "ex" ? Conn::Exists : Conn::Forall);
  }
  if (w == "eq") {
    lex_.next();
    lex_.expect(Tok::LParen);
    // A bare unresolved variable on the left takes its sort from the right.
    Token left_tok = lex_.peek();
    bool left_open = left_tok.kind == Tok::Ident && !sig_.functions.count(left_tok.text) &&
                     !free_.count(left_tok.text) && !is_keyword(left_tok.text);
    for (const auto& v : bound_)
      if (v.name == left_tok.text) left_open = false;
    Term lhs;
    if (left_open) {
      identifier("(term)");
      left_open = lex_.peek().kind != Tok::LParen;
      if (!left_open) sort_fail(left_tok, "unknown function symbol '" + left_tok.text + "'");
    } else {
      lhs = term();
    }
    lex_.expect(Tok::Comma, "between equality sides");
    Term rhs;
    if (lhs) {
      std::string s = lhs->sort;
      rhs = term(&s);
    } else {
      rhs = term();
      std::string s = rhs->sort;
      lhs = variable_or_constant(left_tok, &s);
    }
    lex_.expect(Tok::RParen, "to close the equality");
    return make_eq(std::move(lhs), std::move(rhs));
  }

  std::string name = identifier("(relation symbol)");
  auto it = sig_.relations.find(name);
  if (it == sig_.relations.end()) sort_fail(tok, "unknown relation symbol '" + name + "'");
  const auto& sorts = it->second;
  std::vector<Term> args;
  if (lex_.accept(Tok::LParen)) {
    if (!lex_.accept(Tok::RParen)) {
      do {
        if (args.size() >= sorts.size()) sort_fail(tok, "too many arguments for '" + name + "'");
        args.push_back(term(&sorts[args.size()]));
      } while (lex_.accept(Tok::Comma));
      lex_.expect(Tok::RParen, "after relation arguments");
    }
  }
  if (args.size() != sorts.size())
    sort_fail(tok, "relation '" + name + "' expects " + std::to_string(sorts.size()) +
                       " arguments");
  return make_atom(name, std::move(args));
}

Sequent FormulaReader::sequent() {
  // The context follows the antecedent; read it first so free variables get
  // their declared sorts.
  Lexer probe = lex_;
  int nesting = 0;
  for (;;) {
    Token t = probe.next();
    if (t.kind == Tok::End) probe.fail_at(t, "expected '|-' in sequent");
    if (t.kind == Tok::LParen || t.kind == Tok::LBrack) ++nesting;
    if (t.kind == Tok::RParen || t.kind == Tok::RBrack) --nesting;
    if (t.kind == Tok::Turnstile && nesting == 0) break;
  }
  FormulaReader ctx_reader(probe, sig_, opts_);
  Context ctx = ctx_reader.context();
  for (const auto& v : ctx) declare(v);

  Sequent s;
  s.antecedent = formula();
  lex_.expect(Tok::Turnstile, "in sequent");
  s.context = context();
  s.succedent = formula();
  return s;
}

// ---------------------------------------------------------------- entry points

Formula parse_formula(std::string_view text, const Signature& sig, const Context& known,
                      ParseOptions opts) {
  Lexer lex(text);
  FormulaReader reader(lex, sig, opts);
  for (const auto& v : known) reader.declare(v);
  Formula f = reader.formula();
  lex.expect(Tok::End, "after formula");
  check_formula(sig, f);
  return f;
}

Sequent parse_sequent(std::string_view text, const Signature& sig, ParseOptions opts) {
  Lexer lex(text);
  FormulaReader reader(lex, sig, opts);
  Sequent s = reader.sequent();
  lex.expect(Tok::End, "after sequent");
  check_sequent(sig, s);
  return s;
}

Term parse_term(std::string_view text, const Signature& sig, const Context& known,
                ParseOptions opts) {
  Lexer lex(text);
  FormulaReader reader(lex, sig, opts);
  for (const auto& v : known) reader.declare(v);
  Term t = reader.term();
  lex.expect(Tok::End, "after term");
  return t;
}

Context parse_context(std::string_view text, const Signature& sig, ParseOptions opts) {
  Lexer lex(text);
  FormulaReader reader(lex, sig, opts);
  Context c = reader.context();
  lex.expect(Tok::End, "after context");
  return c;
}

}  // namespace ik
