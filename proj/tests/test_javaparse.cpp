#include <catch2/catch_amalgamated.hpp>

#include "strata/corpus.hpp"
#include "strata/javaparse.hpp"

using namespace strata;

namespace {

MethodUnit make(const std::string& source, const std::string& name = "f") {
  return build_method("test:" + name, name, source);
}

std::vector<std::string> names(const std::vector<LocalVariable>& vars) {
  std::vector<std::string> out;
  for (const auto& v : vars) out.push_back(v.name);
  return out;
}

const LocalVariable& by_name(const MethodUnit& m, const std::string& name) {
  for (const auto& v : m.local_vars)
    if (v.name == name) return v;
  FAIL("no variable named " + name);
  throw Error("unreachable");
}

}  // namespace

TEST_CASE("simple declaration with one use") {
  MethodUnit m = make("int f() { int sum = 0; return sum; }");
  REQUIRE(names(m.local_vars) == std::vector<std::string>{"sum"});
  CHECK(m.local_vars[0].use_spans.size() == 1);
  CHECK(m.local_vars[0].scope_depth == 1);
}

TEST_CASE("no declarations means no candidates") {
  MethodUnit m = make("int f(int a) { return a + 1; }");
  CHECK(m.local_vars.empty());
  CHECK_FALSE(m.attackable());
}

TEST_CASE("formal parameters are excluded") {
  MethodUnit m = make("int f(int a, final Map<String, List<Integer>> b, String... rest) {"
                      " int x = a; return x; }");
  CHECK(names(m.local_vars) == std::vector<std::string>{"x"});
}

TEST_CASE("for-init and enhanced-for variables") {
  MethodUnit m = make(
      "int f(int[] arr) {\n"
      "  int total = 0;\n"
      "  for (int i = 0; i < arr.length; i++) {\n"
      "    total += arr[i];\n"
      "  }\n"
      "  for (String s : names()) {\n"
      "    total += s.length();\n"
      "  }\n"
      "  return total;\n"
      "}");
  CHECK(names(m.local_vars) == std::vector<std::string>{"total", "i", "s"});
  CHECK(by_name(m, "i").use_spans.size() == 3);  // condition, update, body
  CHECK(by_name(m, "s").use_spans.size() == 1);
  CHECK(by_name(m, "i").scope_depth == 1);
}

TEST_CASE("catch and lambda parameters are excluded") {
  MethodUnit m = make(
      "void f() {\n"
      "  int kept = 1;\n"
      "  try { run(kept); } catch (Exception e) { log(e); }\n"
      "  items.forEach(it -> handle(it));\n"
      "}");
  CHECK(names(m.local_vars) == std::vector<std::string>{"kept"});
}

TEST_CASE("shadowing names are omitted entirely") {
  MethodUnit m = make(
      "void f() {\n"
      "  int x = 1;\n"
      "  { int x = 2; use(x); }\n"
      "  int y = 3;\n"
      "  use(y);\n"
      "}");
  CHECK(names(m.local_vars) == std::vector<std::string>{"y"});
}

TEST_CASE("name shared with a parameter is omitted") {
  MethodUnit m = make("void f(int v) { { int v = 2; } int w = v; use(w); }");
  CHECK(names(m.local_vars) == std::vector<std::string>{"w"});
}

TEST_CASE("uses inside comments and literals are not occurrences") {
  MethodUnit m = make(
      "String f() {\n"
      "  String acc = \"acc\"; // acc is also here\n"
      "  /* acc */\n"
      "  return acc + \"acc\";\n"
      "}");
  REQUIRE(names(m.local_vars) == std::vector<std::string>{"acc"});
  CHECK(by_name(m, "acc").use_spans.size() == 1);
  for (const ByteSpan& s : by_name(m, "acc").use_spans) {
    for (const Token& t : m.body_tokens) {
      if (t.span.begin <= s.begin && s.end <= t.span.end) {
        CHECK(t.kind == TokenKind::identifier);
      }
    }
  }
}

TEST_CASE("member access and method calls are not uses") {
  MethodUnit m = make(
      "int f() {\n"
      "  int size = 0;\n"
      "  size = size + this.size + obj.size;\n"
      "  size(size);\n"
      "  return size;\n"
      "}");
  REQUIRE(names(m.local_vars) == std::vector<std::string>{"size"});
  // uses: size = size + ... (2), the call argument (1), return size (1)
  CHECK(by_name(m, "size").use_spans.size() == 4);
}

TEST_CASE("scope ends at the enclosing block") {
  MethodUnit m = make(
      "int f() {\n"
      "  { int inner = 1; use(inner); }\n"
      "  inner = 2;\n"  // refers to a field named inner, outside the local's scope
      "  return 0;\n"
      "}");
  REQUIRE(names(m.local_vars) == std::vector<std::string>{"inner"});
  CHECK(by_name(m, "inner").use_spans.size() == 1);
  CHECK(by_name(m, "inner").scope_depth == 2);
}

TEST_CASE("generic declarations and qualified types") {
  MethodUnit m = make(
      "void f() {\n"
      "  Map<String, List<Integer>> lookup = new HashMap<String, List<Integer>>();\n"
      "  java.util.List<String> other = null;\n"
      "  lookup.clear();\n"
      "  other.clear();\n"
      "}");
  CHECK(names(m.local_vars) == std::vector<std::string>{"lookup", "other"});
}

TEST_CASE("multi-declarator statements") {
  MethodUnit m = make("void f() { int a = 1, b, c = f(a, 2); use(a, b, c); }");
  CHECK(names(m.local_vars) == std::vector<std::string>{"a", "b", "c"});
  CHECK(by_name(m, "a").use_spans.size() == 2);
}

TEST_CASE("comparison expressions are not declarations") {
  MethodUnit m = make("boolean f(int a, int b) { boolean r = a < b; return r && a > b; }");
  CHECK(names(m.local_vars) == std::vector<std::string>{"r"});
}

TEST_CASE("for without block body is conservatively omitted") {
  MethodUnit m =
      make("int f(int n) { int acc = 0; for (int i = 0; i < n; i++) acc += i; return acc; }");
  CHECK(names(m.local_vars) == std::vector<std::string>{"acc"});
}

TEST_CASE("deterministic discovery") {
  const std::string src =
      "int f(int[] arr) { int total = 0; for (int i = 0; i < arr.length; i++) { total += arr[i]; } return total; }";
  MethodUnit m1 = make(src);
  MethodUnit m2 = make(src);
  REQUIRE(m1.local_vars.size() == m2.local_vars.size());
  for (size_t i = 0; i < m1.local_vars.size(); ++i) {
    CHECK(m1.local_vars[i].name == m2.local_vars[i].name);
    CHECK(m1.local_vars[i].decl_span == m2.local_vars[i].decl_span);
    CHECK(m1.local_vars[i].use_spans == m2.local_vars[i].use_spans);
  }
}

TEST_CASE("rename replaces declaration and all uses") {
  MethodUnit m = make(
      "int computeProduct(List<Integer> values) {\n"
      "  int product = 1;\n"
      "  for (Integer v : values) {\n"
      "    product = product * v;\n"
      "  }\n"
      "  return product;\n"
      "}",
      "computeProduct");
  const LocalVariable& product = by_name(m, "product");
  RenameResult r = rename_variable(m, product, "identify");
  CHECK(r.replaced_count == product.use_spans.size() + 1);
  CHECK(r.replaced_count == 4);
  CHECK(r.new_source.find("product") == std::string::npos);
  CHECK(rename_is_token_safe(m, product, "identify", r.new_source));
}

TEST_CASE("identity rename is permitted and changes nothing") {
  MethodUnit m = make("int f() { int sum = 0; return sum; }");
  RenameResult r = rename_variable(m, by_name(m, "sum"), "sum");
  CHECK(r.new_source == m.source);
  CHECK(rename_is_token_safe(m, by_name(m, "sum"), "sum", r.new_source));
}

TEST_CASE("rename collisions and reserved words are errors") {
  MethodUnit m = make("int f(int existing) { int sum = 0; return sum + existing; }");
  const LocalVariable& sum = by_name(m, "sum");
  CHECK_THROWS_WITH(rename_variable(m, sum, "existing"),
                    Catch::Matchers::ContainsSubstring("name conflict"));
  CHECK_THROWS_WITH(rename_variable(m, sum, "while"),
                    Catch::Matchers::ContainsSubstring("reserved word"));
  CHECK_THROWS_WITH(rename_variable(m, sum, "var"),
                    Catch::Matchers::ContainsSubstring("reserved word"));
  CHECK_THROWS_AS(rename_variable(m, sum, "2bad"), Error);
  // the method name is an identifier token too
  CHECK_THROWS_WITH(rename_variable(m, sum, "f"),
                    Catch::Matchers::ContainsSubstring("name conflict"));
}

TEST_CASE("rename does not touch comments or literals carrying the name") {
  MethodUnit m = make(
      "String f() {\n"
      "  String acc = \"acc\"; // acc stays in this comment\n"
      "  return acc;\n"
      "}");
  RenameResult r = rename_variable(m, by_name(m, "acc"), "fresh");
  CHECK(r.new_source.find("\"acc\"") != std::string::npos);
  CHECK(r.new_source.find("// acc stays") != std::string::npos);
  CHECK(rename_is_token_safe(m, by_name(m, "acc"), "fresh", r.new_source));
}

TEST_CASE("token-diff oracle rejects broken renames") {
  MethodUnit m = make("int f() { int sum = 0; return sum; }");
  const LocalVariable& sum = by_name(m, "sum");
  // missed occurrence: only the declaration changed
  std::string partial = m.source;
  partial.replace(partial.find("sum"), 3, "zzz");
  CHECK_FALSE(rename_is_token_safe(m, sum, "zzz", partial));
  // unrelated edit beyond the rename
  std::string tampered = rename_variable(m, sum, "zzz").new_source;
  tampered.replace(tampered.find("0"), 1, "1");
  CHECK_FALSE(rename_is_token_safe(m, sum, "zzz", tampered));
}

TEST_CASE("rename safety holds for every variable of a mixed fixture") {
  MethodUnit m = make(
      "int f(int[] arr, int seed) {\n"
      "  int total = 0;\n"
      "  String label = \"total\";\n"
      "  for (int i = 0; i < arr.length; i++) {\n"
      "    total += arr[i] * seed;\n"
      "  }\n"
      "  if (total > 10) { total = total - label.length(); }\n"
      "  return total;\n"
      "}");
  REQUIRE(m.local_vars.size() == 3);
  for (const LocalVariable& v : m.local_vars) {
    RenameResult r = rename_variable(m, v, "fresh" + v.name);
    CHECK(rename_is_token_safe(m, v, "fresh" + v.name, r.new_source));
  }
}
