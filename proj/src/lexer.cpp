#include "lexer.hpp"

#include <cctype>

#include "certkit/syntax.hpp"

namespace certkit::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const char* const kSymbols[] = {"->", "!=", "[=", ">=", "<=", "=", "(", ")", ",",
                                ".", ":", "|", "{", "}", ";", "/"};

const char* const kDirectives[] = {"data", "bottom", "queryrules", "query"};

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  bool line_start = true;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    if (c == '#') {
      std::size_t end = text.find('\n', i);
      if (end == std::string::npos) end = text.size();
      std::string rest = text.substr(i + 1, end - i - 1);
      bool directive = false;
      if (line_start) {
        for (const char* d : kDirectives) {
          std::string word(d);
          if (rest.compare(0, word.size(), word) == 0 &&
              (rest.size() == word.size() || !ident_char(rest[word.size()]))) {
            directive = true;
            break;
          }
        }
      }
      if (directive) {
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
        tok.kind = Token::Kind::Directive;
        tok.text = rest;
        out.push_back(tok);
      }
      advance(end - i);
      continue;
    }
    line_start = false;
    if (c == '?') {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      if (j == i + 1) throw SyntaxError(line, col, "expected a variable name after '?'");
      tok.kind = Token::Kind::Var;
      tok.text = text.substr(i + 1, j - i - 1);
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size()) {
          value += text[j + 1];
          j += 2;
        } else if (text[j] == '\'') {
          closed = true;
          ++j;
          break;
        } else if (text[j] == '\n') {
          break;
        } else {
          value += text[j++];
        }
      }
      if (!closed) throw SyntaxError(line, col, "unterminated quoted constant");
      if (value.empty()) throw SyntaxError(line, col, "empty quoted constant");
      tok.kind = Token::Kind::Quoted;
      tok.text = value;
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = text.substr(i, j - i);
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* s : kSymbols) {
      std::string sym(s);
      if (text.compare(i, sym.size(), sym) == 0) {
        tok.kind = Token::Kind::Sym;
        tok.text = sym;
        out.push_back(tok);
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

}  // namespace certkit::detail
