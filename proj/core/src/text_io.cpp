#include "ik/text_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ik {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<SourceLine> content_lines(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t pos = 0;
  std::size_t no = 1;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    // Keep leading whitespace so that columns stay accurate.
    auto end = line.find_last_not_of(" \t\r");
    if (end != std::string_view::npos) out.push_back({std::string(line.substr(0, end + 1)), no});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++no;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t read_count(Lexer& lex, std::string_view what) {
  Token t = lex.expect(Tok::Ident, what);
  if (t.text.find_first_not_of("0123456789") != std::string::npos || t.text.size() > 9)
    lex.fail_at(t, "expected a number for " + std::string(what));
  return std::stoul(t.text);
}

std::string read_key(Lexer& lex) {
  Token t = lex.expect(Tok::Ident, "key");
  lex.expect(Tok::Equals, "after key");
  return t.text;
}

}  // namespace ik
