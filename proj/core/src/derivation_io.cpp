#include "ik/derivation_io.hpp"

#include <map>
#include <sstream>

#include "ik/lexer.hpp"
#include "ik/text_io.hpp"

namespace ik {

// ---------------------------------------------------------------- writing

namespace {

template <class T, class F>
std::string list(const std::vector<T>& xs, F show) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += show(xs[i]);
  }
  return s + "]";
}

template <class V, class F>
std::string address_map(const std::map<Address, V>& m, F show) {
  std::string s = "[";
  bool first = true;
  for (const auto& [a, v] : m) {
    if (!first) s += ", ";
    first = false;
    s += print_address(a) + " -> " + show(v);
  }
  return s + "]";
}

}  // namespace

std::string print_payload(const Payload& p) {
  std::vector<std::string> parts;
  if (p.index) parts.push_back("j=" + std::to_string(*p.index));
  if (!p.terms.empty() || !p.target.empty()) {
    parts.push_back("terms=" + list(p.terms, print_term));
    parts.push_back("target=" + print_context(p.target));
  }
  if (p.phi) {
    parts.push_back("x=" + print_context(p.eq_x));
    parts.push_back("y=" + print_context(p.eq_y));
    parts.push_back("w=" + print_context(p.eq_w));
    parts.push_back("phi=" + print(p.phi));
  }
  if (p.tree) {
    const auto& t = *p.tree;
    parts.push_back("gamma=" + std::to_string(t.gamma));
    parts.push_back("height=" + std::to_string(t.height));
    if (!t.contexts.empty()) parts.push_back("contexts=" + address_map(t.contexts, print_context));
    if (!t.blocks.empty()) parts.push_back("blocks=" + address_map(t.blocks, print_context));
    parts.push_back("labels=" + address_map(t.label, [](const Formula& f) { return print(f); }));
  }
  if (p.bar) parts.push_back("bar=" + list(p.bar->nodes, print_address));
  if (p.tree || !p.limits.empty())
    parts.push_back("limits=" + list(p.limits, [](const Formula& f) { return print(f); }));
  if (!p.axiom.empty()) parts.push_back("axiom=" + p.axiom);
  std::string s = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += "; ";
    s += parts[i];
  }
  return s + "}";
}

namespace {

struct Writer {
  std::map<const Derivation*, std::string> ids;
  std::ostringstream out;

  const std::string& emit(const Derivation& d) {
    if (auto it = ids.find(&d); it != ids.end()) return it->second;
    std::vector<std::string> prem;
    for (const auto& p : d.premises) prem.push_back(emit(*p));
    std::string id = "n" + std::to_string(ids.size());
    out << id << ": " << rule_name(d.rule)
        << " premises=" << list(prem, [](const std::string& s) { return s; })
        << " payload=" << print_payload(d.payload) << " conclusion=" << print(d.conclusion)
        << "\n";
    return ids.emplace(&d, id).first->second;
  }
};

}  // namespace

std::string write_derivation(const Derivation& d, const Signature* sig) {
  Writer w;
  if (sig) w.out << sig->to_text();
  w.emit(d);
  return w.out.str();
}

// ---------------------------------------------------------------- reading

namespace {

Address read_address(Lexer& lex) {
  Address a;
  lex.expect(Tok::Less, "to open an address");
  if (lex.accept(Tok::Greater)) return a;
  do {
    a.push_back(read_count(lex, "address component"));
  } while (lex.accept(Tok::Comma));
  lex.expect(Tok::Greater, "to close an address");
  return a;
}

template <class F>
void read_list(Lexer& lex, F item) {
  lex.expect(Tok::LBrack, "to open a list");
  if (lex.accept(Tok::RBrack)) return;
  do {
    item();
  } while (lex.accept(Tok::Comma));
  lex.expect(Tok::RBrack, "to close a list");
}

void skip_value(Lexer& lex) {
  int depth = 0;
  for (;;) {
    const Token& t = lex.peek();
    if (t.kind == Tok::End) lex.fail_at(t, "unterminated payload");
    if (depth == 0 && (t.kind == Tok::Semi || t.kind == Tok::RBrace)) return;
    if (t.kind == Tok::LParen || t.kind == Tok::LBrack || t.kind == Tok::LBrace) ++depth;
    if (t.kind == Tok::RParen || t.kind == Tok::RBrack || t.kind == Tok::RBrace) --depth;
    lex.next();
  }
}

bool context_key(const std::string& k) {
  return k == "target" || k == "x" || k == "y" || k == "w" || k == "contexts" || k == "blocks";
}

class PayloadReader {
public:
  PayloadReader(const Signature& sig, ParseOptions opts, Context known)
      : sig_(sig), opts_(opts), known_(std::move(known)) {}

  // First pass: collect the variables introduced by context-valued keys.
  void scan_contexts(Lexer lex) {
    lex.expect(Tok::LBrace, "to open payload");
    if (lex.accept(Tok::RBrace)) return;
    do {
      if (lex.peek().kind == Tok::RBrace) break;
      auto key = read_key(lex);
      if (!context_key(key)) {
        skip_value(lex);
        continue;
      }
      if (key == "contexts" || key == "blocks") {
        read_list(lex, [&] {
          read_address(lex);
          lex.expect(Tok::Arrow, "after address");
          add_known(reader(lex).context());
        });
      } else {
        add_known(reader(lex).context());
      }
    } while (lex.accept(Tok::Semi));
  }

  Payload read(Lexer& lex) {
    Payload p;
    lex.expect(Tok::LBrace, "to open payload");
    if (lex.accept(Tok::RBrace)) return p;
    do {
      if (lex.peek().kind == Tok::RBrace) break;
      Token at = lex.peek();
      auto key = read_key(lex);
      value(lex, at, key, p);
    } while (lex.accept(Tok::Semi));
    lex.expect(Tok::RBrace, "to close payload");
    return p;
  }

private:
  FormulaReader reader(Lexer& lex) const {
    FormulaReader r(lex, sig_, opts_);
    for (const auto& v : known_) r.declare(v);
    return r;
  }

  void add_known(const Context& c) { known_.insert(known_.end(), c.begin(), c.end()); }

  static TreeFamily& tree(Payload& p) {
    if (!p.tree) p.tree.emplace();
    return *p.tree;
  }

  void value(Lexer& lex, const Token& at, const std::string& key, Payload& p) {
    if (key == "j") {
      p.index = read_count(lex, "index");
    } else if (key == "terms") {
      read_list(lex, [&] { p.terms.push_back(reader(lex).term()); });
    } else if (key == "target") {
      p.target = reader(lex).context();
    } else if (key == "x") {
      p.eq_x = reader(lex).context();
    } else if (key == "y") {
      p.eq_y = reader(lex).context();
    } else if (key == "w") {
      p.eq_w = reader(lex).context();
    } else if (key == "phi") {
      p.phi = reader(lex).formula();
    } else if (key == "gamma") {
      tree(p).gamma = read_count(lex, "gamma");
    } else if (key == "height") {
      tree(p).height = read_count(lex, "height");
    } else if (key == "labels") {
      read_list(lex, [&] {
        auto a = read_address(lex);
        lex.expect(Tok::Arrow, "after address");
        tree(p).label[a] = reader(lex).formula();
      });
    } else if (key == "contexts" || key == "blocks") {
      read_list(lex, [&] {
        auto a = read_address(lex);
        lex.expect(Tok::Arrow, "after address");
        auto& m = key == "contexts" ? tree(p).contexts : tree(p).blocks;
        m[a] = reader(lex).context();
      });
    } else if (key == "bar") {
      p.bar.emplace();
      read_list(lex, [&] { p.bar->nodes.push_back(read_address(lex)); });
    } else if (key == "limits") {
      read_list(lex, [&] { p.limits.push_back(reader(lex).formula()); });
    } else if (key == "axiom") {
      p.axiom = lex.expect(Tok::Ident, "axiom name").text;
    } else {
      lex.fail_at(at, "unknown payload key '" + key + "'");
    }
  }

  const Signature& sig_;
  ParseOptions opts_;
  Context known_;
};

}  // namespace

DerivationFile parse_derivation_file(std::string_view text, ParseOptions opts) {
  DerivationFile file;
  std::map<std::string, DerivationPtr> nodes;
  DerivationPtr last;
  bool in_header = true;

  for (const auto& line : content_lines(text)) {
    if (in_header && file.sig.apply_declaration(line.text, line.number)) continue;
    in_header = false;

    const std::string& s = line.text;
    auto colon = s.find(':');
    if (colon == std::string::npos) throw SyntaxError("expected '<id>:'", line.number, 1);
    std::string id = trim(s.substr(0, colon));
    if (id.empty()) throw SyntaxError("missing node id", line.number, 1);
    if (nodes.count(id)) throw SyntaxError("duplicate node id '" + id + "'", line.number, 1);

    auto tag_start = s.find_first_not_of(" \t", colon + 1);
    if (tag_start == std::string::npos) throw SyntaxError("missing rule", line.number, colon + 2);
    auto tag_end = s.find_first_of(" \t", tag_start);
    std::string tag = s.substr(tag_start, tag_end - tag_start);
    auto rule = rule_from_name(tag);
    if (!rule) throw SyntaxError("unknown rule '" + tag + "'", line.number, tag_start + 1);

    std::size_t rest = tag_end == std::string::npos ? s.size() : tag_end;
    Lexer lex(std::string_view(s).substr(rest), line.number, rest + 1);

    auto d = std::make_shared<Derivation>();
    d->rule = *rule;

    std::optional<Lexer> payload_at;
    bool have_conclusion = false;
    while (!lex.at_end()) {
      Token at = lex.peek();
      auto key = read_key(lex);
      if (key == "premises") {
        read_list(lex, [&] {
          Token t = lex.expect(Tok::Ident, "premise id");
          auto it = nodes.find(t.text);
          if (it == nodes.end()) lex.fail_at(t, "undefined premise '" + t.text + "'");
          d->premises.push_back(it->second);
        });
      } else if (key == "payload") {
        payload_at = lex;
        lex.expect(Tok::LBrace, "to open payload");
        int depth = 1;
        while (depth > 0) {
          Token t = lex.next();
          if (t.kind == Tok::End) lex.fail_at(t, "unterminated payload");
          if (t.kind == Tok::LBrace) ++depth;
          if (t.kind == Tok::RBrace) --depth;
        }
      } else if (key == "conclusion") {
        FormulaReader reader(lex, file.sig, opts);
        d->conclusion = reader.sequent();
        have_conclusion = true;
        if (!lex.at_end()) lex.fail("unexpected text after conclusion");
      } else {
        lex.fail_at(at, "unknown field '" + key + "'");
      }
    }
    if (!have_conclusion) throw SyntaxError("node '" + id + "' lacks a conclusion", line.number, 1);

    if (payload_at) {
      PayloadReader pr(file.sig, opts, d->conclusion.context);
      pr.scan_contexts(*payload_at);
      d->payload = pr.read(*payload_at);
    }
    nodes[id] = d;
    last = d;
    ++file.nodes;
  }
  if (!last) throw SyntaxError("derivation file has no nodes", 1, 1);
  file.root = last;
  return file;
}

}  // namespace ik
