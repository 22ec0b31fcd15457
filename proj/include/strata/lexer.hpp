#pragma once

#include <array>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "strata/util.hpp"

namespace strata {

enum class TokenKind { identifier, keyword, literal, op, punct, comment, whitespace };

struct ByteSpan {
  size_t begin = 0;
  size_t end = 0;  // exclusive
  size_t size() const { return end - begin; }
  bool operator==(const ByteSpan&) const = default;
};

struct Token {
  TokenKind kind;
  ByteSpan span;
  std::string text;
};

class LexError : public Error {
 public:
  LexError(const std::string& msg, size_t offset)
      : Error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// JLS reserved words plus the true/false/null literals.
inline const std::set<std::string, std::less<>>& java_keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "abstract", "assert",   "boolean",    "break",      "byte",   "case",
      "catch",    "char",     "class",      "const",      "continue", "default",
      "do",       "double",   "else",       "enum",       "extends",  "final",
      "finally",  "float",    "for",        "goto",       "if",       "implements",
      "import",   "instanceof", "int",      "interface",  "long",     "native",
      "new",      "package",  "private",    "protected",  "public",   "return",
      "short",    "static",   "strictfp",   "super",      "switch",   "synchronized",
      "this",     "throw",    "throws",     "transient",  "try",      "void",
      "volatile", "while",    "true",       "false",      "null"};
  return kw;
}

// Words refused as replacement identifiers: reserved words plus the
// contextual keywords that would change meaning in modern sources.
inline const std::set<std::string, std::less<>>& java_reserved_names() {
  static const std::set<std::string, std::less<>> names = [] {
    std::set<std::string, std::less<>> s(java_keywords().begin(), java_keywords().end());
    for (const char* w : {"var", "record", "yield", "sealed", "permits", "_"}) s.insert(w);
    return s;
  }();
  return names;
}

namespace detail {

inline bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; }
inline bool is_ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

// Multi-char operators, longest first. The right-shift family is absent on
// purpose: every '>' lexes as its own token, so generic-type closers like
// List<List<String>> need no special casing downstream.
inline const std::array<std::string_view, 21>& multi_ops() {
  static const std::array<std::string_view, 21> ops = {
      "<<=", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
      "--",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<"};
  return ops;
}

}  // namespace detail

// Lexes Java source into a token stream whose spans cover the input
// exactly; concatenating token texts reproduces the source byte for byte.
// Comments and string/char literals are single tokens. Throws LexError on
// unbalanced braces, unterminated literals or comments, and non-ASCII
// bytes outside comments and literals.
inline std::vector<Token> lex_java(std::string_view src) {
  std::vector<Token> tokens;
  const size_t n = src.size();
  size_t i = 0;
  long brace_depth = 0;
  auto push = [&](TokenKind kind, size_t begin, size_t end) {
    tokens.push_back(Token{kind, ByteSpan{begin, end}, std::string(src.substr(begin, end - begin))});
  };
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    size_t start = i;
    if (std::isspace(c)) {
      while (i < n && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
      push(TokenKind::whitespace, start, i);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      push(TokenKind::comment, start, i);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      size_t close = src.find("*/", i + 2);
      if (close == std::string_view::npos) throw LexError("unterminated block comment", start);
      i = close + 2;
      push(TokenKind::comment, start, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = static_cast<char>(c);
      ++i;
      while (true) {
        if (i >= n || src[i] == '\n') throw LexError("unterminated literal", start);
        if (src[i] == '\\') {
          i += 2;
          continue;
        }
        if (src[i] == quote) {
          ++i;
          break;
        }
        ++i;
      }
      push(TokenKind::literal, start, i);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++i;
      while (i < n) {
        unsigned char d = static_cast<unsigned char>(src[i]);
        if (std::isalnum(d) || d == '_' || d == '.') {
          ++i;
        } else if ((d == '+' || d == '-') && (src[i - 1] == 'e' || src[i - 1] == 'E' ||
                                              src[i - 1] == 'p' || src[i - 1] == 'P')) {
          ++i;
        } else {
          break;
        }
      }
      push(TokenKind::literal, start, i);
      continue;
    }
    if (detail::is_ident_start(c)) {
      ++i;
      while (i < n && detail::is_ident_part(static_cast<unsigned char>(src[i]))) ++i;
      std::string_view word = src.substr(start, i - start);
      push(java_keywords().count(word) ? TokenKind::keyword : TokenKind::identifier, start, i);
      continue;
    }
    if (c >= 0x80) throw LexError("non-ASCII character", start);
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ';' ||
        c == ',' || c == '.' || c == '@') {
      if (c == '{') ++brace_depth;
      if (c == '}' && --brace_depth < 0) throw LexError("unbalanced braces", start);
      push(TokenKind::punct, start, start + 1);
      ++i;
      continue;
    }
    bool matched = false;
    for (std::string_view op : detail::multi_ops()) {
      if (src.substr(i, op.size()) == op) {
        i += op.size();
        push(TokenKind::op, start, i);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/%=<>!&|^~?:").find(static_cast<char>(c)) != std::string_view::npos) {
      push(TokenKind::op, start, start + 1);
      ++i;
      continue;
    }
    throw LexError("unexpected character", start);
  }
  if (brace_depth != 0) throw LexError("unbalanced braces", n);
  return tokens;
}

}  // namespace strata
