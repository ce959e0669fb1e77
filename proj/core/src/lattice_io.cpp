#include <sstream>

#include "ik/lattice.hpp"
#include "ik/lexer.hpp"
#include "ik/text_io.hpp"

namespace ik {

namespace {

struct Pending {
  Token target;
  std::vector<Token> family;
  bool join;
};

}  // namespace

LatticeFile parse_lattice_file(std::string_view text) {
  std::vector<std::string> names;
  std::vector<std::pair<Token, Token>> pairs;
  std::vector<Pending> designated;
  bool have_elements = false;
  for (const auto& src : content_lines(text)) {
    Lexer lex(src.text, src.number, 1);
    Token head = lex.expect(Tok::Ident, "line keyword");
    if (head.text == "elements") {
      if (have_elements) lex.fail_at(head, "elements given twice");
      have_elements = true;
      while (!lex.at_end()) {
        Token t = lex.expect(Tok::Ident, "element");
        for (const auto& n : names)
          if (n == t.text) lex.fail_at(t, "duplicate element '" + t.text + "'");
        names.push_back(t.text);
      }
    } else if (head.text == "leq") {
      Token a = lex.expect(Tok::Ident, "element");
      Token b = lex.expect(Tok::Ident, "element");
      pairs.emplace_back(a, b);
    } else if (head.text == "join" || head.text == "meet") {
      Pending p{lex.expect(Tok::Ident, "element"), {}, head.text == "join"};
      lex.expect(Tok::Equals);
      while (!lex.at_end()) p.family.push_back(lex.expect(Tok::Ident, "element"));
      if (p.family.empty()) lex.fail_at(head, "empty family");
      designated.push_back(std::move(p));
    } else {
      lex.fail_at(head, "unknown lattice line '" + head.text + "'");
    }
    if (!lex.at_end()) lex.fail("unexpected text at end of line");
  }
  if (!have_elements) throw SyntaxError("missing 'elements' line", 1, 1);

  auto index = [&](const Token& t) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == t.text) return i;
    throw SyntaxError("unknown element '" + t.text + "'", t.line, t.column);
  };
  std::vector<std::vector<bool>> rel(names.size(), std::vector<bool>(names.size()));
  for (const auto& [a, b] : pairs) rel[index(a)][index(b)] = true;

  LatticeFile file;
  file.lattice = FinLattice::from_poset(Poset::from_relation(names, rel));
  for (const auto& p : designated) {
    Designated d{index(p.target), {}};
    for (const auto& t : p.family) d.family.push_back(index(t));
    (p.join ? file.designated.joins : file.designated.meets).push_back(std::move(d));
  }
  return file;
}

std::string write_lattice(const FinLattice& L, const DesignatedJoins& S) {
  std::ostringstream out;
  out << "elements";
  for (LElem a = 0; a < L.size(); ++a) out << " " << L.name(a);
  out << "\n";
  // Cover relation only; the reader closes it.
  for (LElem a = 0; a < L.size(); ++a)
    for (LElem b = 0; b < L.size(); ++b) {
      if (a == b || !L.leq(a, b)) continue;
      bool cover = true;
      for (LElem c = 0; c < L.size() && cover; ++c)
        if (c != a && c != b && L.leq(a, c) && L.leq(c, b)) cover = false;
      if (cover) out << "leq " << L.name(a) << " " << L.name(b) << "\n";
    }
  auto family = [&](const char* kw, const Designated& d) {
    out << kw << " " << L.name(d.target) << " =";
    for (auto x : d.family) out << " " << L.name(x);
    out << "\n";
  };
  for (const auto& d : S.joins) family("join", d);
  for (const auto& d : S.meets) family("meet", d);
  return out.str();
}

}  // namespace ik
