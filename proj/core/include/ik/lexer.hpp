#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ik/syntax.hpp"

namespace ik {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Semi,
  Turnstile,  // |-
  Arrow,      // ->
  Assign,     // :=
  Equals,     // =
  Less,       // <
  Greater,    // >
  LessEq,     // <=
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

const char* describe(Tok t);

/// Tokenizer shared by every text format of the project. Identifiers are
/// runs of letters, digits, `_` and `'`.
class Lexer {
public:
  explicit Lexer(std::string_view text, std::size_t line = 1, std::size_t column = 1);

  const Token& peek();
  Token next();
  bool accept(Tok kind);
  Token expect(Tok kind, std::string_view what = {});
  bool at_end() { return peek().kind == Tok::End; }
  [[noreturn]] void fail(const std::string& msg);
  [[noreturn]] void fail_at(const Token& tok, const std::string& msg);

private:
  void skip_space();
  Token scan();

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
  std::optional<Token> lookahead_;
};

/// Recursive-descent reader for terms, formulas, contexts and sequents over a
/// signature. Unbound identifiers that are not constants are free variables;
/// their sort is taken from `known`, otherwise inferred from the argument
/// position, otherwise the signature's default sort.
class FormulaReader {
public:
  FormulaReader(Lexer& lex, const Signature& sig, ParseOptions opts = {});

  void declare(const Var& v);
  Formula formula();
  Term term(const std::string* expected_sort = nullptr);
  Context context();
  Sequent sequent();

private:
  std::string identifier(std::string_view what);
  Formula family(Conn conn);
  Formula quantified(Conn conn);
  Term variable_or_constant(const Token& tok, const std::string* expected_sort);

  Lexer& lex_;
  const Signature& sig_;
  ParseOptions opts_;
  std::vector<Var> bound_;
  std::map<std::string, std::string> free_;
};

}  // namespace ik
