#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "strata/attack.hpp"
#include "strata/surrogate.hpp"
#include "strata/util.hpp"

namespace strata {

struct F1Triple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Multiset sizes feeding micro-averaged F1: intersection, predicted, and
// reference totals are summed across a corpus before the ratio is taken.
struct MicroCounts {
  size_t intersection = 0;
  size_t predicted = 0;
  size_t truth = 0;

  void add(const MicroCounts& other) {
    intersection += other.intersection;
    predicted += other.predicted;
    truth += other.truth;
  }

  F1Triple triple() const {
    F1Triple t;
    t.precision = predicted == 0 ? 0.0 : static_cast<double>(intersection) / predicted;
    t.recall = truth == 0 ? 0.0 : static_cast<double>(intersection) / truth;
    t.f1 = t.precision + t.recall == 0.0
               ? 0.0
               : 2.0 * t.precision * t.recall / (t.precision + t.recall);
    return t;
  }
};

inline MicroCounts multiset_counts(const std::vector<std::string>& predicted,
                                   const std::vector<std::string>& truth) {
  if (truth.empty()) throw Error("empty reference");
  std::map<std::string, size_t> pred_counts, truth_counts;
  for (const std::string& s : predicted) ++pred_counts[s];
  for (const std::string& s : truth) ++truth_counts[s];
  MicroCounts c;
  c.predicted = predicted.size();
  c.truth = truth.size();
  for (const auto& [s, n] : pred_counts) {
    auto it = truth_counts.find(s);
    if (it != truth_counts.end()) c.intersection += std::min(n, it->second);
  }
  return c;
}

// Subtoken-level multiset F1 of a single prediction.
inline F1Triple subtoken_f1(const std::vector<std::string>& predicted,
                            const std::vector<std::string>& truth) {
  return multiset_counts(predicted, truth).triple();
}

// True iff the predicted subtoken sets differ (set semantics).
inline bool prediction_change(const std::set<std::string>& before,
                              const std::set<std::string>& after) {
  return before != after;
}

// True iff the targeted subtoken made it into the prediction.
inline bool targeted_success(const std::set<std::string>& prediction, const std::string& target) {
  return prediction.count(target) != 0;
}

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;  // clean baseline
  size_t n_examples = 0;
  std::map<std::string, double> per_strategy_f1;
  double prediction_change_pct = 0.0;
  std::optional<double> targeted_success_pct;
};

// Evaluates a model on a clean method set and a batch of perturbations of
// those methods: micro F1 baseline, per-strategy perturbed micro F1,
// prediction-change %, and targeted success % when a target is given.
inline EvalReport evaluate_attack(const SurrogateModel& model,
                                  const std::vector<MethodUnit>& methods,
                                  const std::vector<PerturbationRecord>& perturbations,
                                  const std::optional<std::string>& target = std::nullopt,
                                  size_t jobs = 0) {
  std::map<std::string, const MethodUnit*> by_id;
  for (const MethodUnit& m : methods) by_id[m.id] = &m;
  std::vector<std::string> dangling;
  for (const PerturbationRecord& r : perturbations)
    if (!by_id.count(r.method_id)) dangling.push_back(r.method_id);
  if (!dangling.empty()) {
    std::string msg = "perturbations reference methods outside the eval set:";
    for (size_t i = 0; i < dangling.size() && i < 8; ++i) msg += " " + dangling[i];
    if (dangling.size() > 8) msg += " (+" + std::to_string(dangling.size() - 8) + " more)";
    throw Error(msg);
  }

  EvalReport report;
  report.n_examples = methods.size();

  std::vector<std::set<std::string>> clean_preds(methods.size());
  std::vector<MicroCounts> clean_counts(methods.size());
  parallel_for(methods.size(), jobs, [&](size_t i) {
    clean_preds[i] = predict(model, methods[i]);
    clean_counts[i] = multiset_counts(
        std::vector<std::string>(clean_preds[i].begin(), clean_preds[i].end()),
        methods[i].target_subtokens);
  });
  MicroCounts baseline;
  for (const MicroCounts& c : clean_counts) baseline.add(c);
  F1Triple t = baseline.triple();
  report.precision = t.precision;
  report.recall = t.recall;
  report.f1 = t.f1;

  std::map<std::string, size_t> clean_index;
  for (size_t i = 0; i < methods.size(); ++i) clean_index[methods[i].id] = i;

  struct RecordEval {
    MicroCounts counts;
    std::string strategy;
    bool changed = false;
    bool hit_target = false;
  };
  std::vector<RecordEval> evals(perturbations.size());
  parallel_for(perturbations.size(), jobs, [&](size_t i) {
    const PerturbationRecord& r = perturbations[i];
    const MethodUnit& original = *by_id.at(r.method_id);
    MethodUnit perturbed =
        build_method_shallow(r.method_id, original.target_name, r.new_source);
    std::set<std::string> pred = predict(model, perturbed);
    RecordEval& e = evals[i];
    e.counts = multiset_counts(std::vector<std::string>(pred.begin(), pred.end()),
                               original.target_subtokens);
    e.strategy = strategy_name(r.strategy);
    e.changed = prediction_change(clean_preds[clean_index.at(r.method_id)], pred);
    if (target) e.hit_target = targeted_success(pred, *target);
  });

  std::map<std::string, MicroCounts> per_strategy;
  size_t changed = 0, hits = 0;
  for (const RecordEval& e : evals) {
    per_strategy[e.strategy].add(e.counts);
    if (e.changed) ++changed;
    if (e.hit_target) ++hits;
  }
  for (const auto& [strategy, counts] : per_strategy)
    report.per_strategy_f1[strategy] = counts.triple().f1;
  if (!perturbations.empty())
    report.prediction_change_pct = 100.0 * static_cast<double>(changed) / perturbations.size();
  if (target && !perturbations.empty())
    report.targeted_success_pct = 100.0 * static_cast<double>(hits) / perturbations.size();
  return report;
}

inline nlohmann::ordered_json eval_report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["n_examples"] = r.n_examples;
  j["per_strategy"] = nlohmann::ordered_json::object();
  for (const auto& [strategy, f1] : r.per_strategy_f1) j["per_strategy"][strategy] = f1;
  j["prediction_change_pct"] = r.prediction_change_pct;
  if (r.targeted_success_pct) j["targeted_success_pct"] = *r.targeted_success_pct;
  return j;
}

// One-row CSV form for sweep-style consumption; absent strategies and an
// absent targeted rate leave empty cells.
inline std::string eval_report_csv(const EvalReport& r) {
  auto cell = [&](const char* strategy) {
    auto it = r.per_strategy_f1.find(strategy);
    return it == r.per_strategy_f1.end() ? std::string() : format_fixed(it->second, 4);
  };
  std::string out =
      "precision,recall,f1,n_examples,f1_single,f1_5diff,f1_5same,prediction_change_pct,"
      "targeted_success_pct\n";
  out += format_fixed(r.precision, 4) + "," + format_fixed(r.recall, 4) + "," +
         format_fixed(r.f1, 4) + "," + std::to_string(r.n_examples) + "," + cell("single") +
         "," + cell("5diff") + "," + cell("5same") + "," +
         format_fixed(r.prediction_change_pct, 4) + "," +
         (r.targeted_success_pct ? format_fixed(*r.targeted_success_pct, 4) : std::string()) +
         "\n";
  return out;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw Error("spearman: need matched series");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    size_t i = 0;
    while (i < idx.size()) {
      size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  double mx = 0, my = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(rx.size());
  my /= static_cast<double>(ry.size());
  double cov = 0, vx = 0, vy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mx, dy = ry[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace strata
