#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ik/lexer.hpp"
#include "ik/syntax.hpp"

namespace ik {

/// A non-blank line of an input file with comments removed.
struct SourceLine {
  std::string text;
  std::size_t number;
};

std::vector<SourceLine> content_lines(std::string_view text);

std::string trim(std::string_view s);
std::string read_file(const std::string& path);

/// Reads an unsigned integer token.
std::size_t read_count(Lexer& lex, std::string_view what);

/// Reads `key =` and returns the key.
std::string read_key(Lexer& lex);

}  // namespace ik
