#include <catch2/catch_amalgamated.hpp>

#include "strata/embedding.hpp"
#include "strata/rng.hpp"

using namespace strata;

namespace {

EmbeddingTable tiny_table() {
  EmbeddingTable t;
  t.dim = 2;
  t.unk = {0.0, 0.0};
  t.vectors["alpha"] = {3.0, 4.0};
  t.vectors["beta"] = {1.0, 0.0};
  t.vectors["gamma"] = {0.0, 2.0};
  return t;
}

EmbeddingTable random_table(int dim, size_t count, uint64_t seed) {
  EmbeddingTable t;
  t.dim = dim;
  Rng rng(seed);
  t.unk.resize(dim);
  for (double& v : t.unk) v = rng.uniform_symmetric(0.5);
  for (size_t i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform_symmetric(0.5);
    t.vectors["sub" + std::to_string(i)] = std::move(v);
  }
  return t;
}

}  // namespace

TEST_CASE("l2 norm basics") {
  CHECK(l2_norm(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(l2_norm(std::vector<double>{3, 4}) == 5.0);
}

TEST_CASE("norm homogeneity") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(8);
    for (double& x : v) x = rng.uniform_symmetric(2.0);
    std::vector<double> doubled = v;
    for (double& x : doubled) x *= 2.0;
    CHECK_THAT(l2_norm(doubled), Catch::Matchers::WithinAbs(2.0 * l2_norm(v), 1e-12));
  }
}

TEST_CASE("compose single subtoken is the stored vector") {
  EmbeddingTable t = tiny_table();
  CHECK(compose_token(std::vector<std::string>{"alpha"}, t) == std::vector<double>{3.0, 4.0});
}

TEST_CASE("compose sums only the first five subtokens") {
  EmbeddingTable t = tiny_table();
  std::vector<std::string> seven = {"beta", "beta", "beta", "beta", "beta", "alpha", "alpha"};
  CHECK(compose_token(seven, t) == std::vector<double>{5.0, 0.0});
  // invariance beyond index 5
  std::vector<std::string> five(seven.begin(), seven.begin() + 5);
  CHECK(compose_token(five, t) == compose_token(seven, t));
}

TEST_CASE("five copies scale the norm five-fold") {
  EmbeddingTable t = tiny_table();
  std::vector<std::string> same(5, "alpha");
  CHECK_THAT(l2_norm(compose_token(same, t)), Catch::Matchers::WithinAbs(25.0, 1e-9));
}

TEST_CASE("absent subtokens contribute the unk vector") {
  EmbeddingTable t = tiny_table();
  t.unk = {10.0, 0.0};
  CHECK(compose_token(std::vector<std::string>{"missing"}, t) == std::vector<double>{10.0, 0.0});
  CHECK(compose_token(std::vector<std::string>{"missing", "beta"}, t) ==
        std::vector<double>{11.0, 0.0});
}

TEST_CASE("triangle inequality over random five-multisets") {
  EmbeddingTable t = random_table(16, 40, 99);
  std::vector<std::string> keys;
  for (const auto& [k, v] : t.vectors) keys.push_back(k);
  Rng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> pick;
    for (int i = 0; i < 5; ++i) pick.push_back(keys[rng.uniform(keys.size())]);
    double lhs = l2_norm(compose_token(pick, t));
    double rhs = 0.0;
    for (const std::string& k : pick) rhs += l2_norm(t.vectors.at(k));
    CHECK(lhs <= rhs + 1e-9);
  }
  // equality in the colinear case
  for (const std::string& k : keys) {
    std::vector<std::string> same(5, k);
    CHECK_THAT(l2_norm(compose_token(same, t)),
               Catch::Matchers::WithinAbs(5.0 * l2_norm(t.vectors.at(k)), 1e-9));
  }
}

TEST_CASE("identical snapshots have zero drift") {
  EmbeddingTable t = random_table(8, 10, 5);
  SubtokenStats stats;
  for (const auto& [k, v] : t.vectors) stats.counts[k] = 1;
  DriftReport r = drift(t, t, stats);
  for (const auto& [sub, e] : r.per_subtoken) CHECK(e.l2_distance == 0.0);
  CHECK(r.fraction_below.at(0.05) == 1.0);
}

TEST_CASE("fraction below uses a strict inequality") {
  EmbeddingTable pre = random_table(4, 10, 3);
  EmbeddingTable post = pre;
  post.vectors.at("sub0")[2] += 0.05;  // moved by exactly the threshold
  SubtokenStats stats;
  for (const auto& [k, v] : pre.vectors) stats.counts[k] = 2;
  DriftReport r = drift(pre, post, stats);
  CHECK_THAT(r.per_subtoken.at("sub0").l2_distance, Catch::Matchers::WithinAbs(0.05, 1e-12));
  CHECK_THAT(r.fraction_below.at(0.05), Catch::Matchers::WithinAbs(0.9, 1e-12));
  CHECK(r.per_subtoken.at("sub0").count == 2);
}

TEST_CASE("drift validates dimensions and key sets") {
  EmbeddingTable a = random_table(4, 4, 1);
  EmbeddingTable b = random_table(8, 4, 1);
  SubtokenStats stats;
  CHECK_THROWS_WITH(drift(a, b, stats), Catch::Matchers::ContainsSubstring("dimension"));
  EmbeddingTable c = random_table(4, 4, 2);
  c.vectors.erase("sub0");
  c.vectors["other"] = {1, 2, 3, 4};
  CHECK_THROWS_WITH(drift(a, c, stats), Catch::Matchers::ContainsSubstring("sub0"));
}

TEST_CASE("snapshot save/load round trip is byte exact") {
  EmbeddingTable t = random_table(16, 25, 77);
  std::string first = write_embeddings(t);
  EmbeddingTable loaded = read_embeddings(first);
  CHECK(loaded.dim == t.dim);
  CHECK(loaded.vectors.size() == t.vectors.size());
  CHECK(write_embeddings(loaded) == first);
}

TEST_CASE("embedding file format validation") {
  CHECK_THROWS_AS(read_embeddings(""), ValidationError);
  CHECK_THROWS_AS(read_embeddings("STRATA-EMB v2 4 0\nUNK 0 0 0 0\n"), ValidationError);
  CHECK_THROWS_AS(read_embeddings("STRATA-EMB v1 4 1\nUNK 0 0 0 0\n"), ValidationError);
  CHECK_THROWS_AS(read_embeddings("STRATA-EMB v1 2 0\nNOPE 0 0\n"), ValidationError);
}

TEST_CASE("drift csv is rank ordered") {
  EmbeddingTable pre = random_table(4, 3, 11);
  EmbeddingTable post = pre;
  SubtokenStats stats;
  stats.counts["sub0"] = 5;
  stats.counts["sub1"] = 50;
  stats.counts["sub2"] = 5;
  std::string csv = write_drift_csv(drift(pre, post, stats));
  auto lines = split_on(csv, '\n');
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0] == "subtoken,count,l2_distance,pre_norm,post_norm");
  CHECK(lines[1].rfind("sub1,50,", 0) == 0);
  CHECK(lines[2].rfind("sub0,5,", 0) == 0);
  CHECK(lines[3].rfind("sub2,5,", 0) == 0);
}
