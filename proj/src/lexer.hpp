// Shared tokenizer for the rule and DL formats.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace certkit::detail {

struct Token {
  enum class Kind { Ident, Var, Quoted, Sym, Directive, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

std::vector<Token> tokenize(const std::string& text);

}  // namespace certkit::detail
