#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "strata/javaparse.hpp"
#include "strata/method.hpp"
#include "strata/rng.hpp"
#include "strata/vocab.hpp"

namespace strata {

enum class Strategy { single, five_diff, five_same };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::single: return "single";
    case Strategy::five_diff: return "5diff";
    case Strategy::five_same: return "5same";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "single") return Strategy::single;
  if (s == "5diff") return Strategy::five_diff;
  if (s == "5same") return Strategy::five_same;
  throw ValidationError("unknown strategy: " + s + " (expected single|5diff|5same)");
}

struct AttackConfig {
  Strategy strategy = Strategy::five_same;
  Vocabulary vocabulary;
  uint64_t seed = 1;
  std::optional<std::string> target;

  // A target forces 5-same concatenation; `single` is allowed through as
  // an explicit escape hatch for one-token targeted replacements.
  void normalize() {
    if (target && strategy == Strategy::five_diff) strategy = Strategy::five_same;
  }
};

struct PerturbationRecord {
  std::string method_id;
  std::string original_var;
  std::string replacement;
  Strategy strategy = Strategy::five_same;
  std::vector<std::string> subtokens_used;
  uint64_t seed_used = 0;
  std::string new_source;
};

struct SkipNote {
  std::string method_id;
  std::string reason;
};

struct AttackReport {
  std::vector<PerturbationRecord> records;
  std::vector<SkipNote> skips;
  std::vector<SkipNote> errors;
};

struct Replacement {
  std::string identifier;
  std::vector<std::string> subtokens;
};

// The part of a replacement identifier that re-splits into the drawn
// subtokens (strips the digit-guard prefix).
inline std::string replacement_core(const std::string& replacement) {
  return replacement.rfind("v_", 0) == 0 ? replacement.substr(2) : replacement;
}

namespace detail {

// Draws index into a lexicographically sorted view of the vocabulary, so
// two vocabularies with equal subtoken sets sample identically regardless
// of their internal ordering.
inline std::vector<std::string> sorted_pool(const Vocabulary& v) {
  std::vector<std::string> pool = v.subtokens;
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline std::string join_replacement(const std::vector<std::string>& subs) {
  std::string joined = join_underscore(subs);
  if (!joined.empty() && std::isdigit(static_cast<unsigned char>(joined[0])))
    joined = "v_" + joined;  // identifiers cannot start with a digit
  return joined;
}

}  // namespace detail

// Builds one replacement identifier. single: one uniform draw. 5-diff:
// five independent draws with replacement. 5-same: one draw repeated five
// times. Draws are joined with underscores so re-splitting recovers them.
inline Replacement make_replacement(Strategy strategy, const std::vector<std::string>& pool,
                                    Rng& rng) {
  if (pool.empty()) throw Error("empty vocabulary");
  Replacement r;
  switch (strategy) {
    case Strategy::single:
      r.subtokens.push_back(pool[rng.uniform(pool.size())]);
      break;
    case Strategy::five_diff:
      for (int i = 0; i < 5; ++i) r.subtokens.push_back(pool[rng.uniform(pool.size())]);
      break;
    case Strategy::five_same: {
      const std::string& s = pool[rng.uniform(pool.size())];
      r.subtokens.assign(5, s);
      break;
    }
  }
  r.identifier = detail::join_replacement(r.subtokens);
  return r;
}

inline Replacement make_replacement(Strategy strategy, const Vocabulary& vocabulary, Rng& rng) {
  auto pool = detail::sorted_pool(vocabulary);
  return make_replacement(strategy, pool, rng);
}

struct AttackSkip {
  std::string reason;
};

// One untargeted or targeted perturbation of one method: picks a local
// variable uniformly at random, builds a replacement (retrying up to 16
// draws on name collisions), renames, and verifies token safety.
inline std::variant<PerturbationRecord, AttackSkip> attack_method_seeded(
    const MethodUnit& method, const AttackConfig& config,
    const std::vector<std::string>& pool, uint64_t derived_seed) {
  if (method.local_vars.empty()) return AttackSkip{"no local variables"};
  Rng rng(derived_seed);
  const LocalVariable& var = method.local_vars[rng.uniform(method.local_vars.size())];
  for (int attempt = 0; attempt < 16; ++attempt) {
    Replacement rep;
    if (config.target) {
      size_t copies = config.strategy == Strategy::single ? 1 : 5;
      rep.subtokens.assign(copies, *config.target);
      rep.identifier = detail::join_replacement(rep.subtokens);
    } else {
      rep = make_replacement(config.strategy, pool, rng);
    }
    RenameResult renamed;
    try {
      renamed = rename_variable(method, var, rep.identifier);
    } catch (const Error&) {
      continue;  // collision or reserved word: redraw
    }
    if (!rename_is_token_safe(method, var, rep.identifier, renamed.new_source))
      throw Error("rename oracle failed for method " + method.id);
    PerturbationRecord rec;
    rec.method_id = method.id;
    rec.original_var = var.name;
    rec.replacement = rep.identifier;
    rec.strategy = config.strategy;  // caller has normalized targeted configs
    rec.subtokens_used = rep.subtokens;
    rec.seed_used = derived_seed;
    rec.new_source = renamed.new_source;
    return rec;
  }
  throw Error("vocabulary exhausted for method " + method.id);
}

inline std::variant<PerturbationRecord, AttackSkip> attack_method(const MethodUnit& method,
                                                                  AttackConfig config) {
  config.normalize();
  auto pool = detail::sorted_pool(config.vocabulary);
  return attack_method_seeded(method, config, pool,
                              derive_seed(config.seed, method.id, 0));
}

// Up to k records per attackable method, each drawn from an independent
// substream seeded from (config.seed, method id, replicate index); the
// result is the same under any parallel schedule. Per-method errors are
// aggregated, never fatal.
inline AttackReport attack_corpus(const std::vector<MethodUnit>& methods, AttackConfig config,
                                  size_t k_per_method, size_t jobs = 0) {
  if (k_per_method == 0) throw ValidationError("k_per_method must be positive");
  config.normalize();
  auto pool = detail::sorted_pool(config.vocabulary);
  struct Slot {
    std::vector<PerturbationRecord> records;
    std::vector<SkipNote> skips;
    std::vector<SkipNote> errors;
  };
  std::vector<Slot> slots(methods.size());
  parallel_for(methods.size(), jobs, [&](size_t i) {
    const MethodUnit& m = methods[i];
    Slot& slot = slots[i];
    for (size_t k = 0; k < k_per_method; ++k) {
      try {
        auto outcome =
            attack_method_seeded(m, config, pool, derive_seed(config.seed, m.id, k));
        if (std::holds_alternative<AttackSkip>(outcome)) {
          slot.skips.push_back(SkipNote{m.id, std::get<AttackSkip>(outcome).reason});
          break;  // the skip reason is per-method, not per-replicate
        }
        slot.records.push_back(std::move(std::get<PerturbationRecord>(outcome)));
      } catch (const Error& e) {
        slot.errors.push_back(SkipNote{m.id, e.what()});
      }
    }
  });
  AttackReport report;
  for (Slot& s : slots) {
    for (auto& r : s.records) report.records.push_back(std::move(r));
    for (auto& r : s.skips) report.skips.push_back(std::move(r));
    for (auto& r : s.errors) report.errors.push_back(std::move(r));
  }
  return report;
}

// Perturbation interchange format: JSONL, one record per line.
inline std::string write_perturbations_jsonl(const std::vector<PerturbationRecord>& records) {
  std::string out;
  for (const PerturbationRecord& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.method_id;
    j["var"] = r.original_var;
    j["replacement"] = r.replacement;
    j["strategy"] = strategy_name(r.strategy);
    j["subtokens"] = r.subtokens_used;
    j["seed"] = r.seed_used;
    j["source"] = r.new_source;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<PerturbationRecord> read_perturbations_jsonl(const std::string& bytes) {
  std::vector<PerturbationRecord> out;
  size_t line_no = 0;
  for (const std::string& line : split_on(bytes, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j.contains("source"))
      throw ValidationError("malformed perturbations JSONL at line " + std::to_string(line_no));
    PerturbationRecord r;
    r.method_id = j["id"];
    r.original_var = j.value("var", "");
    r.replacement = j.value("replacement", "");
    r.strategy = parse_strategy(j.value("strategy", "5same"));
    r.subtokens_used = j.value("subtokens", std::vector<std::string>{});
    r.seed_used = j.value("seed", 0ULL);
    r.new_source = j["source"];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace strata
