#pragma once

#include <string>
#include <vector>

#include "strata/attack.hpp"
#include "strata/metrics.hpp"
#include "strata/surrogate.hpp"
#include "strata/vocab.hpp"

namespace strata {

struct SweepRow {
  size_t n = 0;
  double f1 = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepBundle {
  const SurrogateModel* model = nullptr;
  const SubtokenStats* stats = nullptr;          // frequency-mode source
  const std::vector<MethodUnit>* methods = nullptr;  // evaluation set
  uint64_t seed = 1;
  size_t per_method = 1;
  size_t jobs = 0;
};

// Default cutoff grid: powers of two from 16 up to (and including) the
// population size.
inline std::vector<size_t> default_sweep_grid(size_t population) {
  std::vector<size_t> grid;
  for (size_t n = 16; n < population; n *= 2) grid.push_back(n);
  if (population >= 16) grid.push_back(population);
  if (grid.empty()) grid.push_back(population);
  return grid;
}

// For each cutoff n: build the vocabulary, run a full 5-same attack over
// the evaluation set, and record the perturbed micro F1. Failures are
// recorded per row; the sweep never aborts. Rows come back in input order.
inline std::vector<SweepRow> sweep_cutoffs(VocabMode mode, const std::vector<size_t>& n_values,
                                           const SweepBundle& bundle) {
  if (!bundle.model || !bundle.methods) throw ValidationError("sweep needs a model and methods");
  if (mode == VocabMode::frequency && !bundle.stats)
    throw ValidationError("frequency sweep needs subtoken stats");
  std::vector<SweepRow> rows;
  rows.reserve(n_values.size());
  for (size_t n : n_values) {
    SweepRow row;
    row.n = n;
    try {
      Vocabulary vocab = build_vocabulary(mode, n, &bundle.model->embeddings, bundle.stats,
                                          "sweep n=" + std::to_string(n));
      AttackConfig config;
      config.strategy = Strategy::five_same;
      config.vocabulary = std::move(vocab);
      config.seed = bundle.seed;
      AttackReport attack =
          attack_corpus(*bundle.methods, config, bundle.per_method, bundle.jobs);
      EvalReport eval = evaluate_attack(*bundle.model, *bundle.methods, attack.records,
                                        std::nullopt, bundle.jobs);
      auto it = eval.per_strategy_f1.find("5same");
      if (it == eval.per_strategy_f1.end()) throw Error("no 5same records produced");
      row.f1 = it->second;
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// sweep.csv: header 'n,f1', four decimal places; failed rows print nan.
inline std::string write_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,f1\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += r.ok ? format_fixed(r.f1, 4) : "nan";
    out += '\n';
  }
  return out;
}

}  // namespace strata
