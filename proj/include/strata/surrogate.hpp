#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "strata/attack.hpp"
#include "strata/corpus.hpp"
#include "strata/embedding.hpp"
#include "strata/rng.hpp"

namespace strata {

struct TrainConfig {
  int dim = 64;
  double init_range = 0.1;     // embeddings start uniform in [-r, r]
  double learning_rate = 0.05;
  int epochs = 10;
  double threshold = 0.5;      // sigmoid decision threshold, in (0,1)
  uint64_t seed = 1;

  void validate() const {
    if (dim <= 0) throw ValidationError("dim must be positive");
    if (init_range <= 0) throw ValidationError("init_range must be positive");
    if (learning_rate <= 0) throw ValidationError("learning_rate must be positive");
    if (epochs < 0) throw ValidationError("epochs must be non-negative");
    if (!(threshold > 0.0 && threshold < 1.0))
      throw ValidationError("threshold must lie in (0,1)");
  }
};

struct OutputRow {
  std::vector<double> weight;
  double bias = 0.0;
};

// Method-name predictor that keeps code2seq's subtoken embedding
// composition (sum of the first five subtoken vectors per token) and
// replaces everything downstream with a mean-pooled bag of token vectors
// feeding independent per-subtoken logistic outputs. Plain SGD with
// per-example updates, so an embedding row moves exactly as often as its
// subtoken occurs.
struct SurrogateModel {
  EmbeddingTable embeddings;
  std::map<std::string, OutputRow> outputs;  // target subtoken -> weights
  TrainConfig config;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double train_f1 = 0.0;
};

struct TrainResult {
  SurrogateModel model;
  EmbeddingTable pre;   // snapshot before epoch 1
  EmbeddingTable post;  // snapshot after the final epoch
  std::vector<EpochLog> log;
};

namespace detail {

struct TrainExample {
  std::string method_id;
  // subtoken -> number of first-five slots it fills across body tokens
  std::vector<std::pair<std::string, double>> sub_counts;
  double token_count = 0.0;
  std::vector<std::string> labels;  // sorted unique target subtokens
};

inline TrainExample build_example(const MethodUnit& m) {
  TrainExample ex;
  ex.method_id = m.id;
  std::map<std::string, double> counts;
  for (size_t i = m.body_start; i < m.body_tokens.size(); ++i) {
    const Token& t = m.body_tokens[i];
    if (t.kind != TokenKind::identifier) continue;
    std::vector<std::string> subs = split_identifier(t.text);
    if (subs.empty()) continue;
    ex.token_count += 1.0;
    size_t limit = std::min<size_t>(5, subs.size());
    for (size_t k = 0; k < limit; ++k) counts[subs[k]] += 1.0;
  }
  ex.sub_counts.assign(counts.begin(), counts.end());
  std::set<std::string> labels(m.target_subtokens.begin(), m.target_subtokens.end());
  ex.labels.assign(labels.begin(), labels.end());
  return ex;
}

inline std::vector<double> example_vector(const TrainExample& ex, const EmbeddingTable& table) {
  std::vector<double> x(static_cast<size_t>(table.dim), 0.0);
  if (ex.token_count == 0.0) return x;
  for (const auto& [sub, c] : ex.sub_counts) {
    const std::vector<double>& e = table.lookup(sub);
    for (size_t d = 0; d < x.size(); ++d) x[d] += c * e[d];
  }
  for (double& v : x) v /= ex.token_count;
  return x;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// Numerically stable binary cross-entropy: softplus(z) - y*z.
inline double bce(double z, double y) {
  double sp = std::log1p(std::exp(-std::fabs(z))) + std::max(z, 0.0);
  return sp - y * z;
}

// One SGD step; returns the example loss before the update. Touches only
// the embedding rows of subtokens present in the example plus every
// output row.
inline double train_step(SurrogateModel& model, const TrainExample& ex) {
  const double lr = model.config.learning_rate;
  std::vector<double> x = example_vector(ex, model.embeddings);
  std::vector<double> gx(x.size(), 0.0);
  double loss = 0.0;
  auto label_it = ex.labels.begin();
  for (auto& [sub, row] : model.outputs) {
    while (label_it != ex.labels.end() && *label_it < sub) ++label_it;
    double y = (label_it != ex.labels.end() && *label_it == sub) ? 1.0 : 0.0;
    double z = row.bias;
    for (size_t d = 0; d < x.size(); ++d) z += row.weight[d] * x[d];
    loss += bce(z, y);
    double g = sigmoid(z) - y;
    for (size_t d = 0; d < x.size(); ++d) {
      gx[d] += g * row.weight[d];
      row.weight[d] -= lr * g * x[d];
    }
    row.bias -= lr * g;
  }
  if (ex.token_count > 0.0) {
    for (const auto& [sub, c] : ex.sub_counts) {
      auto it = model.embeddings.vectors.find(sub);
      std::vector<double>& e =
          it == model.embeddings.vectors.end() ? model.embeddings.unk : it->second;
      double scale = lr * c / ex.token_count;
      for (size_t d = 0; d < e.size(); ++d) e[d] -= scale * gx[d];
    }
  }
  return loss;
}

inline double micro_f1(size_t inter, size_t pred, size_t truth) {
  double p = pred == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(pred);
  double r = truth == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(truth);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace detail

// Mean of the token embedding vectors of every identifier token in the
// method body (the signature is excluded so the label never leaks into
// the features). A method with no identifier tokens maps to the zero
// vector.
inline std::vector<double> featurize(const MethodUnit& m, const EmbeddingTable& table) {
  std::vector<double> x(static_cast<size_t>(table.dim), 0.0);
  double tokens = 0.0;
  for (size_t i = m.body_start; i < m.body_tokens.size(); ++i) {
    const Token& t = m.body_tokens[i];
    if (t.kind != TokenKind::identifier) continue;
    std::vector<std::string> subs = split_identifier(t.text);
    if (subs.empty()) continue;
    std::vector<double> tv = compose_token(subs, table);
    for (size_t d = 0; d < x.size(); ++d) x[d] += tv[d];
    tokens += 1.0;
  }
  if (tokens > 0.0)
    for (double& v : x) v /= tokens;
  return x;
}

// Predicted target subtokens: all with sigmoid score >= threshold, or the
// single argmax when none clears it (never empty; ties go to the
// lexicographically smallest).
inline std::set<std::string> predict(const SurrogateModel& model, const MethodUnit& m) {
  std::vector<double> x = featurize(m, model.embeddings);
  std::set<std::string> out;
  const std::string* best = nullptr;
  double best_z = 0.0;
  for (const auto& [sub, row] : model.outputs) {
    double z = row.bias;
    for (size_t d = 0; d < x.size(); ++d) z += row.weight[d] * x[d];
    if (detail::sigmoid(z) >= model.config.threshold) out.insert(sub);
    if (!best || z > best_z) {
      best = &sub;
      best_z = z;
    }
  }
  if (out.empty() && best) out.insert(*best);
  return out;
}

// Total multi-label logistic loss of one method under the current model.
inline double example_loss(const SurrogateModel& model, const MethodUnit& m) {
  detail::TrainExample ex = detail::build_example(m);
  std::vector<double> x = detail::example_vector(ex, model.embeddings);
  double loss = 0.0;
  auto label_it = ex.labels.begin();
  for (const auto& [sub, row] : model.outputs) {
    while (label_it != ex.labels.end() && *label_it < sub) ++label_it;
    double y = (label_it != ex.labels.end() && *label_it == sub) ? 1.0 : 0.0;
    double z = row.bias;
    for (size_t d = 0; d < x.size(); ++d) z += row.weight[d] * x[d];
    loss += detail::bce(z, y);
  }
  return loss;
}

struct Gradients {
  std::map<std::string, std::vector<double>> embedding;  // includes "UNK" when touched
  std::map<std::string, std::vector<double>> output_weight;
  std::map<std::string, double> output_bias;
};

// Analytic gradients of example_loss; the training step applies exactly
// these scaled by the learning rate (asserted in tests).
inline Gradients gradients(const SurrogateModel& model, const MethodUnit& m) {
  detail::TrainExample ex = detail::build_example(m);
  std::vector<double> x = detail::example_vector(ex, model.embeddings);
  Gradients g;
  std::vector<double> gx(x.size(), 0.0);
  auto label_it = ex.labels.begin();
  for (const auto& [sub, row] : model.outputs) {
    while (label_it != ex.labels.end() && *label_it < sub) ++label_it;
    double y = (label_it != ex.labels.end() && *label_it == sub) ? 1.0 : 0.0;
    double z = row.bias;
    for (size_t d = 0; d < x.size(); ++d) z += row.weight[d] * x[d];
    double gz = detail::sigmoid(z) - y;
    std::vector<double> gw(x.size());
    for (size_t d = 0; d < x.size(); ++d) {
      gw[d] = gz * x[d];
      gx[d] += gz * row.weight[d];
    }
    g.output_weight[sub] = std::move(gw);
    g.output_bias[sub] = gz;
  }
  if (ex.token_count > 0.0) {
    for (const auto& [sub, c] : ex.sub_counts) {
      std::string key = model.embeddings.contains(sub) ? sub : std::string("UNK");
      std::vector<double>& ge =
          g.embedding.try_emplace(key, std::vector<double>(x.size(), 0.0)).first->second;
      double scale = c / ex.token_count;
      for (size_t d = 0; d < x.size(); ++d) ge[d] += scale * gx[d];
    }
  }
  return g;
}

// Trains a fresh surrogate. The embedding vocabulary is every subtoken of
// the corpus (bodies plus names); the output space is every subtoken of
// the training-set method names. Example order is reshuffled each epoch by
// a seeded permutation, so results depend only on (corpus, config).
inline TrainResult train(const std::vector<MethodUnit>& methods, const TrainConfig& config) {
  config.validate();
  if (methods.empty()) throw Error("empty corpus");
  TrainResult result;
  SurrogateModel& model = result.model;
  model.config = config;

  SubtokenStats stats = compute_stats(methods);
  Rng init_rng(derive_seed(config.seed, "init"));
  model.embeddings.dim = config.dim;
  model.embeddings.unk.resize(static_cast<size_t>(config.dim));
  for (double& v : model.embeddings.unk) v = init_rng.uniform_symmetric(config.init_range);
  for (const auto& [sub, count] : stats.counts) {
    std::vector<double> v(static_cast<size_t>(config.dim));
    for (double& e : v) e = init_rng.uniform_symmetric(config.init_range);
    model.embeddings.vectors[sub] = std::move(v);
  }

  std::set<std::string> label_space;
  for (const MethodUnit& m : methods)
    label_space.insert(m.target_subtokens.begin(), m.target_subtokens.end());
  if (label_space.empty()) throw Error("empty target space");
  for (const std::string& sub : label_space)
    model.outputs[sub] = OutputRow{std::vector<double>(static_cast<size_t>(config.dim), 0.0), 0.0};

  std::vector<detail::TrainExample> examples;
  examples.reserve(methods.size());
  for (const MethodUnit& m : methods) examples.push_back(detail::build_example(m));

  result.pre = model.embeddings;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<size_t> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng epoch_rng(derive_seed(config.seed, "epoch", static_cast<uint64_t>(epoch)));
    epoch_rng.shuffle(order);
    double loss_sum = 0.0;
    for (size_t idx : order) loss_sum += detail::train_step(model, examples[idx]);
    size_t inter = 0, pred_n = 0, truth_n = 0;
    for (const MethodUnit& m : methods) {
      std::set<std::string> pred = predict(model, m);
      std::set<std::string> truth(m.target_subtokens.begin(), m.target_subtokens.end());
      for (const std::string& s : pred)
        if (truth.count(s)) ++inter;
      pred_n += pred.size();
      truth_n += truth.size();
    }
    result.log.push_back(EpochLog{epoch, loss_sum / static_cast<double>(examples.size()),
                                  detail::micro_f1(inter, pred_n, truth_n)});
  }
  result.post = model.embeddings;
  return result;
}

// Continues training on perturbed examples; the original method name stays
// the label. Records must reference methods present in originals_by_id.
inline SurrogateModel finetune_adversarial(SurrogateModel model,
                                           const std::vector<PerturbationRecord>& records,
                                           const std::map<std::string, const MethodUnit*>& originals_by_id,
                                           int epochs = 1) {
  if (records.empty()) throw Error("empty record list");
  std::vector<detail::TrainExample> examples;
  std::vector<std::string> dangling;
  for (const PerturbationRecord& r : records) {
    auto it = originals_by_id.find(r.method_id);
    if (it == originals_by_id.end()) {
      dangling.push_back(r.method_id);
      continue;
    }
    MethodUnit perturbed =
        build_method_shallow(r.method_id, it->second->target_name, r.new_source);
    examples.push_back(detail::build_example(perturbed));
  }
  if (!dangling.empty()) {
    std::string msg = "perturbations reference unknown methods:";
    for (size_t i = 0; i < dangling.size() && i < 8; ++i) msg += " " + dangling[i];
    throw Error(msg);
  }
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    std::vector<size_t> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng epoch_rng(derive_seed(model.config.seed, "finetune", static_cast<uint64_t>(epoch)));
    epoch_rng.shuffle(order);
    for (size_t idx : order) detail::train_step(model, examples[idx]);
  }
  return model;
}

// Model file: the embedding snapshot followed by an output-weights
// section 'STRATA-OUT v1 <count>' with one '<subtoken> <d floats> <bias>'
// line per target subtoken.
inline std::string write_model(const SurrogateModel& model) {
  std::string out = write_embeddings(model.embeddings);
  out += "STRATA-OUT v1 " + std::to_string(model.outputs.size()) + "\n";
  for (const auto& [sub, row] : model.outputs) {
    out += sub;
    for (double w : row.weight) {
      out += ' ';
      out += format_sig9(w);
    }
    out += ' ';
    out += format_sig9(row.bias);
    out += '\n';
  }
  return out;
}

inline SurrogateModel read_model(const std::string& bytes) {
  std::vector<std::string> lines = split_on(bytes, '\n');
  size_t idx = 0;
  SurrogateModel model;
  model.embeddings = read_embeddings_at(lines, idx);
  model.config.dim = model.embeddings.dim;
  if (idx >= lines.size()) throw ValidationError("model file: missing output section");
  auto header = split_on(lines[idx], ' ');
  if (header.size() != 3 || header[0] != "STRATA-OUT" || header[1] != "v1")
    throw ValidationError("model file: bad output header (expected 'STRATA-OUT v1 <count>')");
  size_t count = std::stoull(header[2]);
  ++idx;
  for (size_t i = 0; i < count; ++i, ++idx) {
    if (idx >= lines.size()) throw ValidationError("model file: truncated output section");
    auto parts = split_on(lines[idx], ' ');
    if (parts.size() != static_cast<size_t>(model.embeddings.dim) + 2)
      throw ValidationError("model file: output row has wrong arity");
    OutputRow row;
    row.weight.resize(static_cast<size_t>(model.embeddings.dim));
    for (int d = 0; d < model.embeddings.dim; ++d)
      row.weight[static_cast<size_t>(d)] = std::stod(parts[static_cast<size_t>(d) + 1]);
    row.bias = std::stod(parts.back());
    model.outputs[parts[0]] = std::move(row);
  }
  return model;
}

inline std::string write_train_log_csv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,loss,train_f1\n";
  for (const EpochLog& e : log) {
    out += std::to_string(e.epoch);
    out += ',';
    out += format_fixed(e.loss, 6);
    out += ',';
    out += format_fixed(e.train_f1, 4);
    out += '\n';
  }
  return out;
}

}  // namespace strata
