#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

#include "strata/corpus.hpp"
#include "strata/rng.hpp"

using namespace strata;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("strata-corpus-" + std::to_string(Rng(std::random_device{}()).next()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Independent count of method declarations by brute-force brace matching:
// every '(' whose matching ')' is followed (modulo a throws clause) by '{'
// and preceded by an identifier.
size_t brute_force_method_count(const std::string& src) {
  auto toks = lex_java(src);
  std::vector<Token> sig;
  for (const Token& t : toks)
    if (t.kind != TokenKind::whitespace && t.kind != TokenKind::comment) sig.push_back(t);
  size_t count = 0;
  long depth = 0;
  for (size_t i = 1; i + 1 < sig.size(); ++i) {
    if (sig[i].text == "{") ++depth;
    if (sig[i].text == "}") --depth;
    if (sig[i].text != "(" || sig[i - 1].kind != TokenKind::identifier || depth < 1) continue;
    if (i >= 2 && (sig[i - 2].text == "new" || sig[i - 2].text == "." || sig[i - 2].text == "@"))
      continue;
    long pd = 0;
    size_t j = i;
    while (j < sig.size()) {
      if (sig[j].text == "(") ++pd;
      if (sig[j].text == ")" && --pd == 0) break;
      ++j;
    }
    size_t k = j + 1;
    if (k < sig.size() && sig[k].text == "throws") {
      ++k;
      while (k < sig.size() && (sig[k].kind == TokenKind::identifier || sig[k].text == "," ||
                                sig[k].text == "."))
        ++k;
    }
    if (k < sig.size() && sig[k].text == "{") ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("directory with one file and one method") {
  TempDir dir;
  write_file(dir.path / "A.java",
             "class A {\n  int getValue() {\n    int v = 1;\n    return v;\n  }\n}\n");
  IngestResult r = ingest_corpus(dir.path);
  REQUIRE(r.methods.size() == 1);
  CHECK(r.methods[0].target_name == "getValue");
  CHECK(r.methods[0].target_subtokens == std::vector<std::string>{"get", "value"});
  CHECK(r.methods[0].id == "A.java:10");
  CHECK(r.skipped == 0);
}

TEST_CASE("nested class with three methods") {
  const std::string source =
      "class Outer {\n"
      "  int first() { return 1; }\n"
      "  static class Inner {\n"
      "    void second(int x) { use(x); }\n"
      "    String third() { return \"s\"; }\n"
      "  }\n"
      "}\n";
  CHECK(brute_force_method_count(source) == 3);
  TempDir dir;
  write_file(dir.path / "Outer.java", source);
  IngestResult r = ingest_corpus(dir.path);
  REQUIRE(r.methods.size() == 3);
  CHECK(r.methods[0].target_name == "first");
  CHECK(r.methods[1].target_name == "second");
  CHECK(r.methods[2].target_name == "third");
}

TEST_CASE("jsonl corpus passes through") {
  std::vector<MethodUnit> methods;
  for (int i = 0; i < 4; ++i)
    methods.push_back(build_method("m" + std::to_string(i), "doWork",
                                   "void doWork() { int w = " + std::to_string(i) + "; use(w); }"));
  std::string jsonl = write_methods_jsonl(methods);
  IngestResult r = read_methods_jsonl(jsonl);
  REQUIRE(r.methods.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(r.methods[i].id == methods[i].id);
    CHECK(r.methods[i].source == methods[i].source);
  }
  // byte-identical re-serialization
  CHECK(write_methods_jsonl(r.methods) == jsonl);
}

TEST_CASE("unlexable methods are skipped and counted") {
  std::string jsonl =
      write_methods_jsonl({build_method("ok", "fine", "void fine() { int a = 1; use(a); }")});
  jsonl += "{\"id\":\"bad\",\"name\":\"broken\",\"source\":\"void broken() { int caf\\u00e9 = 1; }\"}\n";
  IngestResult r = read_methods_jsonl(jsonl);
  CHECK(r.methods.size() == 1);
  CHECK(r.skipped == 1);
  REQUIRE(r.skip_notes.size() == 1);
  CHECK(r.skip_notes[0].find("bad") != std::string::npos);
}

TEST_CASE("ingest errors") {
  CHECK_THROWS_AS(ingest_corpus("/no/such/root"), ValidationError);
  TempDir dir;
  write_file(dir.path / "Empty.java", "class Empty { int field; }\n");
  CHECK_THROWS_WITH(ingest_corpus(dir.path), Catch::Matchers::ContainsSubstring("empty corpus"));
}

TEST_CASE("deterministic ordering by path then offset") {
  TempDir dir;
  fs::create_directories(dir.path / "sub");
  write_file(dir.path / "sub/B.java", "class B { void beta() { int b = 1; use(b); } }\n");
  write_file(dir.path / "A.java",
             "class A { void alpha() { int a = 1; use(a); } void gamma() { int g = 2; use(g); } }\n");
  IngestResult r = ingest_corpus(dir.path);
  REQUIRE(r.methods.size() == 3);
  CHECK(r.methods[0].target_name == "alpha");
  CHECK(r.methods[1].target_name == "gamma");
  CHECK(r.methods[2].target_name == "beta");
}

TEST_CASE("stats examples from hand tallies") {
  // identifiers ["fooBar", "foo"] somewhere in one body
  std::vector<MethodUnit> methods = {build_method("a", "m", "void m() { use(fooBar, foo); }")};
  SubtokenStats stats = compute_stats(methods);
  CHECK(stats.counts.at("foo") == 2);
  CHECK(stats.counts.at("bar") == 1);
  CHECK(stats.counts.at("use") == 1);
  CHECK(stats.counts.at("m") == 1);  // target name only; signature not double counted
  CHECK(stats.total == 5);
}

TEST_CASE("method with no body identifiers counts only its name") {
  std::vector<MethodUnit> methods = {build_method("a", "a", "void a(){}")};
  SubtokenStats stats = compute_stats(methods);
  CHECK(stats.counts.size() == 1);
  CHECK(stats.counts.at("a") == 1);
  CHECK(stats.total == 1);
}

TEST_CASE("rank order sorts by count then lexicographically") {
  std::vector<MethodUnit> methods;
  std::string body = "void m() { ";
  for (int i = 0; i < 10; ++i) body += "use(get); ";
  body += "use(tournament); }";
  methods.push_back(build_method("a", "m", body));
  SubtokenStats stats = compute_stats(methods);
  CHECK(stats.counts.at("get") == 10);
  CHECK(stats.counts.at("tournament") == 1);
  size_t rank_get = 0, rank_tournament = 0;
  for (size_t i = 0; i < stats.rank_order.size(); ++i) {
    if (stats.rank_order[i] == "get") rank_get = i;
    if (stats.rank_order[i] == "tournament") rank_tournament = i;
  }
  CHECK(rank_get < rank_tournament);
  // ties: "m" (1) vs "tournament" (1) vs "use" (10)
  CHECK(stats.counts.at("use") == 10);
}

TEST_CASE("stats are permutation invariant") {
  std::vector<MethodUnit> methods;
  for (int i = 0; i < 6; ++i)
    methods.push_back(build_method("m" + std::to_string(i), "workItem",
                                   "void workItem() { int localSum = " + std::to_string(i) +
                                       "; use(localSum); }"));
  SubtokenStats forward = compute_stats(methods);
  std::reverse(methods.begin(), methods.end());
  SubtokenStats backward = compute_stats(methods);
  CHECK(forward.counts == backward.counts);
  CHECK(forward.rank_order == backward.rank_order);
  CHECK(forward.total == backward.total);
}

TEST_CASE("stats total matches brute force on a random fixture") {
  Rng rng(4242);
  std::vector<MethodUnit> methods;
  uint64_t expected = 0;
  for (int i = 0; i < 20; ++i) {
    std::string body = "void m" + std::to_string(i) + "() { ";
    size_t ids = 1 + rng.uniform(5);
    for (size_t k = 0; k < ids; ++k) body += "use(someValue" + std::to_string(rng.uniform(3)) + "); ";
    body += "}";
    methods.push_back(build_method("m" + std::to_string(i), "m" + std::to_string(i), body));
    // per identifier: use(1) + some,value,digit(3); plus name m<i> = m + digit
    expected += ids * 4 + 2;
  }
  SubtokenStats stats = compute_stats(methods);
  CHECK(stats.total == expected);
}

TEST_CASE("stats csv round trip") {
  std::vector<MethodUnit> methods = {
      build_method("a", "getName", "String getName() { String name = base; return name; }")};
  SubtokenStats stats = compute_stats(methods);
  std::string csv = write_stats_csv(stats);
  CHECK(csv.rfind("subtoken,count\n", 0) == 0);
  SubtokenStats back = read_stats_csv(csv);
  CHECK(back.counts == stats.counts);
  CHECK(back.rank_order == stats.rank_order);
  CHECK(back.total == stats.total);
  CHECK_THROWS_AS(read_stats_csv("wrong,header\nx,1\n"), ValidationError);
}
