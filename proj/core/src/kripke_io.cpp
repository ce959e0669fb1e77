#include <algorithm>
#include <sstream>

#include "ik/kripke.hpp"
#include "ik/lexer.hpp"
#include "ik/text_io.hpp"

namespace ik {

namespace {

class ModelReader {
public:
  explicit ModelReader(ModelFile& f) : file_(f), m_(f.model) {}

  void line(const SourceLine& src) {
    Lexer lex(src.text, src.number, 1);
    Token head = lex.peek();
    std::string trimmed = trim(src.text);
    if (trimmed.rfind("refuted-at", 0) == 0) {
      Lexer rest(std::string_view(src.text).substr(src.text.find("refuted-at") + 10), src.number,
                 src.text.find("refuted-at") + 11);
      file_.refuted_at = world(rest);
      end(rest);
      return;
    }
    lex.next();
    if (head.text == "worlds") {
      while (!lex.at_end()) {
        Token t = lex.expect(Tok::Ident, "world name");
        if (m_.world_index(t.text)) lex.fail_at(t, "duplicate world '" + t.text + "'");
        m_.add_world(t.text);
      }
    } else if (head.text == "order") {
      do {
        auto a = world(lex);
        lex.expect(Tok::LessEq, "in order pair");
        auto b = world(lex);
        m_.leq[a][b] = true;
      } while (lex.accept(Tok::Comma));
      end(lex);
    } else if (head.text == "domain") {
      auto w = world(lex);
      auto s = sort(lex);
      lex.expect(Tok::Equals);
      auto& dom = m_.worlds[w].domain[s];
      if (!dom.empty()) lex.fail_at(head, "domain given twice");
      braces(lex, [&] {
        Token t = lex.expect(Tok::Ident, "element");
        for (const auto& e : dom)
          if (e == t.text) lex.fail_at(t, "duplicate element '" + t.text + "'");
        dom.push_back(t.text);
      });
      end(lex);
    } else if (head.text == "rel") {
      auto w = world(lex);
      Token name = lex.expect(Tok::Ident, "relation");
      auto it = m_.sig.relations.find(name.text);
      if (it == m_.sig.relations.end()) lex.fail_at(name, "unknown relation '" + name.text + "'");
      lex.expect(Tok::Equals);
      auto& tuples = m_.worlds[w].rel[name.text];
      braces(lex, [&] { tuples.insert(tuple(lex, w, it->second)); });
      end(lex);
    } else if (head.text == "fun") {
      auto w = world(lex);
      Token name = lex.expect(Tok::Ident, "function");
      auto it = m_.sig.functions.find(name.text);
      if (it == m_.sig.functions.end()) lex.fail_at(name, "unknown function '" + name.text + "'");
      lex.expect(Tok::Equals);
      auto& table = m_.worlds[w].fun[name.text];
      braces(lex, [&] {
        Token at = lex.peek();
        auto args = tuple(lex, w, it->second.args);
        lex.expect(Tok::Arrow, "in function entry");
        auto val = element(lex, w, it->second.result);
        if (!table.emplace(args, val).second) lex.fail_at(at, "function entry given twice");
      });
      end(lex);
    } else if (head.text == "map") {
      auto a = world(lex);
      lex.expect(Tok::LessEq, "in map header");
      auto b = world(lex);
      auto s = sort(lex);
      lex.expect(Tok::Equals);
      std::vector<Elem> h(m_.worlds[a].size(s), ~Elem{0});
      braces(lex, [&] {
        auto x = element(lex, a, s);
        lex.expect(Tok::Arrow, "in map entry");
        h[x] = element(lex, b, s);
      });
      for (std::size_t e = 0; e < h.size(); ++e)
        if (h[e] == ~Elem{0})
          lex.fail_at(head, "map misses element '" + m_.worlds[a].domain[s][e] + "'");
      m_.maps[{a, b}][s] = std::move(h);
      end(lex);
    } else if (head.text == "env") {
      Token v = lex.expect(Tok::Ident, "variable");
      lex.expect(Tok::Equals);
      Token e = lex.expect(Tok::Ident, "element");
      file_.env[v.text] = e.text;
      end(lex);
    } else {
      lex.fail_at(head, "unknown model line '" + head.text + "'");
    }
  }

private:
  static void end(Lexer& lex) {
    if (!lex.at_end()) lex.fail("unexpected text at end of line");
  }

  template <class F>
  static void braces(Lexer& lex, F item) {
    lex.expect(Tok::LBrace);
    if (lex.accept(Tok::RBrace)) return;
    do {
      item();
    } while (lex.accept(Tok::Comma));
    lex.expect(Tok::RBrace);
  }

  std::size_t world(Lexer& lex) {
    Token t = lex.expect(Tok::Ident, "world");
    auto w = m_.world_index(t.text);
    if (!w) lex.fail_at(t, "unknown world '" + t.text + "'");
    return *w;
  }

  std::string sort(Lexer& lex) {
    Token t = lex.expect(Tok::Ident, "sort");
    if (!m_.sig.has_sort(t.text)) lex.fail_at(t, "unknown sort '" + t.text + "'");
    return t.text;
  }

  Elem element(Lexer& lex, std::size_t w, const std::string& s) {
    Token t = lex.expect(Tok::Ident, "element");
    const auto& dom = m_.worlds[w].domain[s];
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (dom[i] == t.text) return static_cast<Elem>(i);
    lex.fail_at(t, "'" + t.text + "' is not in the " + s + "-domain of " + m_.worlds[w].name);
  }

  Tuple tuple(Lexer& lex, std::size_t w, const std::vector<std::string>& sorts) {
    Tuple t;
    if (sorts.size() == 1 && lex.peek().kind == Tok::Ident) return {element(lex, w, sorts[0])};
    Token open = lex.expect(Tok::LParen, "tuple");
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      if (i) lex.expect(Tok::Comma, "in tuple");
      t.push_back(element(lex, w, sorts[i]));
    }
    if (!lex.accept(Tok::RParen)) lex.fail_at(open, "tuple has the wrong length");
    return t;
  }

  ModelFile& file_;
  KripkeModel& m_;
};

bool is_declaration(const std::string& line) {
  std::istringstream ss(line);
  std::string kw;
  ss >> kw;
  return (kw == "sort" || kw == "rel" || kw == "fun" || kw == "const") &&
         line.find('=') == std::string::npos;
}

}  // namespace

ModelFile parse_model_file(std::string_view text) {
  ModelFile file;
  ModelReader reader(file);
  bool header = true;
  for (const auto& line : content_lines(text)) {
    if (header && is_declaration(line.text)) {
      file.model.sig.apply_declaration(line.text, line.number);
      continue;
    }
    header = false;
    reader.line(line);
  }
  complete_model(file.model);
  return file;
}

std::string write_model(const KripkeModel& m, const Refutation* r, const Context* ctx) {
  std::ostringstream out;
  out << m.sig.to_text();
  out << "worlds";
  for (const auto& w : m.worlds) out << " " << w.name;
  out << "\n";
  for (std::size_t i = 0; i < m.worlds.size(); ++i)
    for (std::size_t j = 0; j < m.worlds.size(); ++j)
      if (i != j && m.leq[i][j])
        out << "order " << m.worlds[i].name << " <= " << m.worlds[j].name << "\n";

  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s;
  };
  auto tuple = [&](const World& w, const std::vector<std::string>& sorts, const Tuple& t) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < t.size(); ++i) names.push_back(w.domain.at(sorts[i])[t[i]]);
    return "(" + join(names) + ")";
  };

  for (const auto& w : m.worlds) {
    for (const auto& [s, dom] : w.domain)
      out << "domain " << w.name << " " << s << " = {" << join(dom) << "}\n";
    for (const auto& [name, tuples] : w.rel) {
      std::vector<std::string> items;
      for (const auto& t : tuples) items.push_back(tuple(w, m.sig.relations.at(name), t));
      out << "rel " << w.name << " " << name << " = {" << join(items) << "}\n";
    }
    for (const auto& [name, table] : w.fun) {
      const auto& decl = m.sig.functions.at(name);
      std::vector<std::string> items;
      for (const auto& [args, v] : table)
        items.push_back(tuple(w, decl.args, args) + "->" + w.domain.at(decl.result)[v]);
      out << "fun " << w.name << " " << name << " = {" << join(items) << "}\n";
    }
  }
  for (const auto& [key, tr] : m.maps) {
    if (key.first == key.second) continue;
    const auto& a = m.worlds[key.first];
    const auto& b = m.worlds[key.second];
    for (const auto& [s, h] : tr) {
      std::vector<std::string> items;
      for (std::size_t e = 0; e < h.size(); ++e)
        items.push_back(a.domain.at(s)[e] + "->" + b.domain.at(s)[h[e]]);
      out << "map " << a.name << "<=" << b.name << " " << s << " = {" << join(items) << "}\n";
    }
  }
  if (r) {
    out << "refuted-at " << m.worlds[r->world].name << "\n";
    const auto& w = m.worlds[r->world];
    for (const auto& [v, e] : r->env)
      if (!ctx || std::find(ctx->begin(), ctx->end(), v) != ctx->end())
        out << "env " << v.name << " = " << w.domain.at(v.sort)[e] << "\n";
  }
  return out.str();
}

}  // namespace ik
