#pragma once

#include <string>
#include <vector>

#include "strata/lexer.hpp"
#include "strata/subtoken.hpp"

namespace strata {

// One local variable discovered inside a method body. decl_span is the
// declaring occurrence; use_spans are every other in-scope occurrence.
struct LocalVariable {
  std::string name;
  ByteSpan decl_span;
  std::vector<ByteSpan> use_spans;
  int scope_depth = 0;
};

// One parsed Java method: signature through closing brace.
struct MethodUnit {
  std::string id;
  std::string target_name;
  std::vector<std::string> target_subtokens;
  std::string source;
  std::vector<Token> body_tokens;  // full token stream of `source`
  size_t body_start = 0;           // index of the first token after the body '{'
  std::vector<LocalVariable> local_vars;

  bool attackable() const { return !local_vars.empty(); }
};

namespace detail {

inline size_t find_body_start(const std::vector<Token>& tokens) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::punct && tokens[i].text == "{") return i + 1;
  }
  throw LexError("method has no body", 0);
}

}  // namespace detail

// Builds a MethodUnit from raw parts. local_vars is left empty; the
// javaparse analysis fills it (see analyze_method in javaparse.hpp).
inline MethodUnit build_method_shallow(std::string id, std::string name, std::string source) {
  MethodUnit m;
  m.id = std::move(id);
  m.target_name = std::move(name);
  m.target_subtokens = split_identifier(m.target_name);
  m.source = std::move(source);
  m.body_tokens = lex_java(m.source);
  m.body_start = detail::find_body_start(m.body_tokens);
  return m;
}

}  // namespace strata
