#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "strata/corpus.hpp"
#include "strata/rng.hpp"

namespace strata {

// Deterministic synthetic Java method generator: seeded body templates
// over a Zipfian subtoken pool. The pool is derived from pool_seed alone,
// so corpora generated with different `seed` values share one identifier
// universe with similar frequency statistics but disjoint method content —
// the same relationship two real Java corpora have to each other.
struct SynthConfig {
  size_t count = 2000;
  uint64_t seed = 1;
  uint64_t pool_seed = 1234;
  size_t pool_size = 3000;
};

namespace detail {

inline const std::vector<std::string>& common_subtokens() {
  static const std::vector<std::string> words = {
      "get",    "set",    "count",  "index",  "value",  "result", "item",   "list",
      "name",   "size",   "data",   "node",   "key",    "map",    "file",   "read",
      "write",  "buffer", "line",   "next",   "text",   "code",   "user",   "time",
      "total",  "sum",    "max",    "min",    "temp",   "flag",   "input",  "output",
      "state",  "level",  "start",  "end",    "check",  "find",   "add",    "remove",
      "update", "load",   "save",   "parse",  "build",  "make",   "run",    "init",
      "base",   "util",   "info",   "num",    "len",    "pos",    "str",    "buf",
      "val",    "obj",    "ref",    "err",    "msg",    "src",    "dst",    "tmp",
      "cur",    "prev",   "first",  "last",   "width",  "height", "color",  "row",
      "col",    "event",  "queue",  "stack",  "tree",   "graph",  "path",   "root",
      "left",   "right",  "parent", "child",  "hash",   "cache",  "lock",   "thread",
      "task",   "job",    "work",   "batch",  "chunk",  "block",  "page",   "frame",
      "view",   "model",  "field",  "kind",   "mode",   "status", "option", "param",
      "arg",    "config", "context", "client", "server", "request", "response", "header",
      "body",   "token",  "session", "stream", "reader", "writer", "format", "encode",
      "decode", "sort",   "search", "filter", "match",  "group",  "order",  "limit",
      "offset", "range",  "scale",  "rate",   "score",  "weight", "delta",  "merge"};
  return words;
}

// Pool index 0 is the most frequent rank. Common programming words fill
// the top ranks; seeded pseudo-syllable words fill the rest.
inline std::vector<std::string> build_subtoken_pool(uint64_t pool_seed, size_t pool_size) {
  std::vector<std::string> pool;
  std::set<std::string> seen;
  for (const std::string& w : common_subtokens()) {
    if (pool.size() >= pool_size) break;
    if (java_reserved_names().count(w) || !seen.insert(w).second) continue;
    pool.push_back(w);
  }
  static const char consonants[] = "bcdfghjklmnprstvwz";
  static const char vowels[] = "aeiou";
  Rng rng(derive_seed(pool_seed, "subtoken-pool"));
  while (pool.size() < pool_size) {
    std::string w;
    size_t syllables = 2 + rng.uniform(2);  // 2 or 3
    for (size_t s = 0; s < syllables; ++s) {
      w += consonants[rng.uniform(sizeof(consonants) - 1)];
      w += vowels[rng.uniform(sizeof(vowels) - 1)];
    }
    if (rng.uniform(2)) w += consonants[rng.uniform(sizeof(consonants) - 1)];
    if (java_reserved_names().count(w) || !seen.insert(w).second) continue;
    pool.push_back(w);
  }
  return pool;
}

// Zipf(s=1.07) over pool ranks, drawn by binary search on the cumulative
// weight table.
class ZipfSampler {
 public:
  explicit ZipfSampler(size_t population, double exponent = 1.07) {
    cumulative_.reserve(population);
    double acc = 0.0;
    for (size_t k = 0; k < population; ++k) {
      acc += 1.0 / std::pow(static_cast<double>(k + 1), exponent);
      cumulative_.push_back(acc);
    }
  }

  size_t draw(Rng& rng) const {
    double u = rng.next_double() * cumulative_.back();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

inline std::string camel(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i == 0) {
      out += parts[i];
    } else {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(parts[i][0])));
      out += parts[i].substr(1);
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<MethodUnit> generate_corpus(const SynthConfig& config) {
  if (config.count == 0) throw ValidationError("count must be positive");
  if (config.pool_size < 64) throw ValidationError("pool_size must be at least 64");
  const std::vector<std::string> pool =
      detail::build_subtoken_pool(config.pool_seed, config.pool_size);
  const detail::ZipfSampler zipf(pool.size());
  static const std::vector<std::string> counters = {"i", "j", "k", "n", "idx", "pos"};

  std::vector<MethodUnit> methods;
  methods.reserve(config.count);
  for (size_t mi = 0; mi < config.count; ++mi) {
    Rng rng(derive_seed(config.seed, "synth-method", mi));
    std::set<std::string> used;  // identifier texts already present in the method

    auto draw_sub = [&] { return pool[zipf.draw(rng)]; };
    auto fresh = [&](auto maker) {
      for (int tries = 0; tries < 32; ++tries) {
        std::string cand = maker();
        if (used.insert(cand).second) return cand;
      }
      std::string cand = maker();
      while (!used.insert(cand).second) cand += "x";
      return cand;
    };

    size_t name_len = [&] {
      uint64_t u = rng.uniform(10);
      return u < 2 ? size_t{1} : (u < 7 ? size_t{2} : size_t{3});
    }();
    std::vector<std::string> name_subs;
    while (name_subs.size() < name_len) {
      std::string s = draw_sub();
      if (std::find(name_subs.begin(), name_subs.end(), s) == name_subs.end())
        name_subs.push_back(s);
    }
    std::string name = detail::camel(name_subs);
    used.insert(name);

    std::string main_var = fresh([&] { return detail::camel(name_subs); });
    // a second identifier correlated with the name half the time keeps
    // some signal outside the renameable local
    auto correlated_or_noise = [&](double p_correlated) {
      return fresh([&] {
        std::vector<std::string> parts;
        if (rng.next_double() < p_correlated)
          parts.push_back(name_subs[rng.uniform(name_subs.size())]);
        parts.push_back(draw_sub());
        if (parts.size() == 1 && rng.uniform(2)) parts.push_back(draw_sub());
        return detail::camel(parts);
      });
    };
    std::string field = correlated_or_noise(0.5);
    std::string param = correlated_or_noise(0.4);
    std::string cnt = fresh([&] { return counters[rng.uniform(counters.size())]; });
    std::string lit1 = std::to_string(2 + rng.uniform(97));
    std::string lit2 = std::to_string(2 + rng.uniform(97));

    uint64_t t = rng.uniform(100);
    std::string src;
    if (t < 30) {
      src = "int " + name + "() {\n    int " + main_var + " = " + field + " + " + lit1 +
            ";\n    if (" + main_var + " > " + lit2 + ") {\n        " + main_var + " = " +
            lit2 + " - " + main_var + ";\n    }\n    return " + main_var + ";\n}\n";
    } else if (t < 50) {
      src = "int " + name + "(int[] " + param + ") {\n    int " + main_var +
            " = 0;\n    for (int " + cnt + " = 0; " + cnt + " < " + param + ".length; " + cnt +
            "++) {\n        " + main_var + " = " + main_var + " + " + param + "[" + cnt +
            "] * " + lit1 + ";\n    }\n    return " + main_var + ";\n}\n";
    } else if (t < 70) {
      src = "String " + name + "(String " + param + ") {\n    String " + main_var + " = \"" +
            name + "\" + " + param + ";\n    // append " + field + " to " + main_var +
            "\n    " + main_var + " = " + main_var + " + " + field + ";\n    return " +
            main_var + ";\n}\n";
    } else if (t < 85) {
      std::string flag = correlated_or_noise(0.0);
      src = "boolean " + name + "(int " + param + ") {\n    int " + main_var + " = " + param +
            " % " + lit1 + ";\n    boolean " + flag + " = " + main_var +
            " == 0;\n    if (" + flag + ") {\n        " + main_var + " = " + main_var + " + " +
            lit2 + ";\n    }\n    return " + flag + ";\n}\n";
    } else {
      src = "int " + name + "(int " + param + ") {\n    int " + main_var + " = " + param +
            ";\n    int " + cnt + " = 0;\n    while (" + main_var + " > " + lit1 +
            ") {\n        " + main_var + " = " + main_var + " / 2;\n        " + cnt + " = " +
            cnt + " + 1;\n    }\n    return " + cnt + ";\n}\n";
    }

    char id[32];
    std::snprintf(id, sizeof(id), "synth-%06zu", mi);
    methods.push_back(build_method(id, name, src));
  }
  return methods;
}

}  // namespace strata
