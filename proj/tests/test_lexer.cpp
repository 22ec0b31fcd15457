#include <catch2/catch_amalgamated.hpp>

#include "strata/lexer.hpp"

using namespace strata;

namespace {

std::string concat(const std::vector<Token>& toks) {
  std::string out;
  for (const Token& t : toks) out += t.text;
  return out;
}

std::vector<std::string> idents(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const Token& t : toks)
    if (t.kind == TokenKind::identifier) out.push_back(t.text);
  return out;
}

}  // namespace

TEST_CASE("basic classification") {
  auto toks = lex_java("int x = 0;");
  std::vector<TokenKind> kinds;
  std::vector<std::string> texts;
  for (const Token& t : toks) {
    if (t.kind == TokenKind::whitespace) continue;
    kinds.push_back(t.kind);
    texts.push_back(t.text);
  }
  CHECK(texts == std::vector<std::string>{"int", "x", "=", "0", ";"});
  CHECK(kinds == std::vector<TokenKind>{TokenKind::keyword, TokenKind::identifier, TokenKind::op,
                                        TokenKind::literal, TokenKind::punct});
}

TEST_CASE("comments produce no identifiers") {
  auto toks = lex_java("{ // x\n /* y z */ }");
  CHECK(idents(toks).empty());
  size_t comments = 0;
  for (const Token& t : toks) comments += t.kind == TokenKind::comment;
  CHECK(comments == 2);
}

TEST_CASE("string and char literals are single tokens") {
  auto toks = lex_java("{ String s = \"a + b // c\"; char c = '\\''; }");
  size_t literals = 0;
  for (const Token& t : toks)
    if (t.kind == TokenKind::literal) ++literals;
  CHECK(literals == 2);
  CHECK(idents(toks) == std::vector<std::string>{"String", "s", "c"});
}

TEST_CASE("round trip reproduces source byte for byte") {
  const std::string fixtures[] = {
      "int f() {\n  return 0;\n}\n",
      "void g(List<Map<String, Integer>> m) { m.size(); }",
      "int h() { int a = 0x1F; long b = 1_000L; double d = 1.5e-3; return a; }",
      "String s() { return \"quoted \\\" brace {\" + '}'; }",
      "void ops() { a >>= 1; b <<= 2; c = a >= b ? a : b; d = a >>> 3; }",
      "void u() { x++; y--; z += 1; w &&= true; }",
  };
  for (const std::string& src : fixtures) {
    CAPTURE(src);
    auto toks = lex_java(src);
    CHECK(concat(toks) == src);
    size_t cursor = 0;
    for (const Token& t : toks) {
      CHECK(t.span.begin == cursor);
      cursor = t.span.end;
    }
    CHECK(cursor == src.size());
  }
}

TEST_CASE("keyword set") {
  auto toks = lex_java("if (true) { return null; }");
  for (const Token& t : toks) {
    if (t.text == "if" || t.text == "true" || t.text == "return" || t.text == "null")
      CHECK(t.kind == TokenKind::keyword);
  }
  CHECK(java_reserved_names().count("var") == 1);
  CHECK(java_keywords().count("var") == 0);
}

TEST_CASE("lex errors carry byte offsets") {
  CHECK_THROWS_AS(lex_java("{ int x = 0; "), LexError);
  CHECK_THROWS_AS(lex_java("int x = 0; }"), LexError);
  CHECK_THROWS_AS(lex_java("{ String s = \"unterminated; }"), LexError);
  CHECK_THROWS_AS(lex_java("{ /* open comment }"), LexError);
  try {
    lex_java("{\n}\n}");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("non-ASCII identifiers are lex errors, literals may carry them") {
  CHECK_THROWS_AS(lex_java("int caf\xc3\xa9 = 1;"), LexError);
  CHECK_NOTHROW(lex_java("{ String s = \"caf\xc3\xa9\"; }"));
  CHECK_NOTHROW(lex_java("{ } // caf\xc3\xa9"));
}
