// strata: identifier-renaming attacks on a method-name prediction model.
//
// Subcommands cover the full pipeline: corpus generation and ingestion,
// frequency stats, surrogate training, embedding drift analysis, attack
// vocabularies and cutoff sweeps, untargeted/targeted attacks, adversarial
// set generation, fine-tuning, and evaluation. Every command writes its
// outputs plus a run manifest into a fresh output directory, and all
// randomness flows from --seed.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "strata/strata.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Accumulates everything a run manifest records; writing it claims the
// output directory (a directory holds exactly one manifest, and outputs
// are write-once).
class OutputDir {
 public:
  OutputDir(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
    fs::create_directories(dir_);
    if (fs::exists(dir_ / "manifest.json"))
      throw strata::ValidationError("output directory already contains a manifest: " +
                                    dir_.string());
  }

  void config(const std::string& key, const std::string& value) { config_[key] = value; }
  void config(const std::string& key, uint64_t value) { config_[key] = std::to_string(value); }
  void config(const std::string& key, double value) { config_[key] = strata::format_sig9(value); }

  void input(const fs::path& path) {
    inputs_[path.string()] = "fnv1a64:" + strata::hex64(strata::fnv1a64(strata::read_file(path)));
  }

  void write(const std::string& name, std::string_view bytes) {
    fs::path p = dir_ / name;
    if (fs::exists(p)) throw strata::Error("refusing to overwrite output: " + p.string());
    strata::write_file(p, bytes);
    std::cout << "wrote " << p.string() << "\n";
  }

  void finish(uint64_t seed, const std::vector<std::string>& argv) {
    ordered_json j;
    j["tool"] = "strata";
    j["version"] = strata::kToolVersion;
    j["command"] = command_;
    j["argv"] = argv;
    j["seed"] = seed;
    j["config"] = ordered_json::object();
    for (const auto& [k, v] : config_) j["config"][k] = v;
    j["inputs"] = ordered_json::object();
    for (const auto& [k, v] : inputs_) j["inputs"][k] = v;
    j["timestamp"] = iso_timestamp();
    strata::write_file(dir_ / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path dir_;
  std::map<std::string, std::string> config_;
  std::map<std::string, std::string> inputs_;
};

std::vector<std::string> collect_argv(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 0; i < argc; ++i) out.emplace_back(argv[i]);
  return out;
}

strata::SurrogateModel load_model_file(const fs::path& p, double threshold) {
  strata::SurrogateModel model = strata::read_model(strata::read_file(p));
  model.config.threshold = threshold;
  return model;
}

std::vector<size_t> parse_n_values(const std::string& csv) {
  std::vector<size_t> out;
  for (const std::string& part : strata::split_on(csv, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stoull(part));
  }
  if (out.empty()) throw strata::ValidationError("--n-values is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identifier-renaming attack toolkit"};
  app.set_version_flag("--version", strata::kToolVersion);
  app.require_subcommand(1);
  std::vector<std::string> argv_copy = collect_argv(argc, argv);

  // ---- gen_synth ----
  auto* gen = app.add_subcommand("gen_synth", "generate a deterministic synthetic corpus");
  strata::SynthConfig synth_cfg;
  std::string gen_out;
  gen->add_option("--count", synth_cfg.count, "number of methods")->capture_default_str();
  gen->add_option("--seed", synth_cfg.seed, "method content seed")->capture_default_str();
  gen->add_option("--pool-seed", synth_cfg.pool_seed, "identifier universe seed")
      ->capture_default_str();
  gen->add_option("--pool-size", synth_cfg.pool_size, "subtoken pool size")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->set_config("--config");
  gen->callback([&] {
    OutputDir out("gen_synth", gen_out);
    out.config("count", static_cast<uint64_t>(synth_cfg.count));
    out.config("pool_seed", synth_cfg.pool_seed);
    out.config("pool_size", static_cast<uint64_t>(synth_cfg.pool_size));
    std::vector<strata::MethodUnit> methods = strata::generate_corpus(synth_cfg);
    out.write("methods.jsonl", strata::write_methods_jsonl(methods));
    out.finish(synth_cfg.seed, argv_copy);
  });

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "ingest .java tree or methods JSONL");
  std::string ingest_in, ingest_out;
  strata::IngestConfig ingest_cfg;
  ingest->add_option("--in", ingest_in, "directory of .java files or a methods JSONL file")
      ->required();
  ingest->add_option("--out", ingest_out, "output directory")->required();
  ingest->add_option("--jobs", ingest_cfg.jobs, "worker cap (0 = cores)")->capture_default_str();
  ingest->add_option("--max-methods", ingest_cfg.max_methods, "truncate corpus (0 = no limit)")
      ->capture_default_str();
  ingest->set_config("--config");
  ingest->callback([&] {
    if (!fs::exists(ingest_in)) throw strata::ValidationError("no such path: " + ingest_in);
    OutputDir out("ingest", ingest_out);
    out.config("in", ingest_in);
    out.config("jobs", static_cast<uint64_t>(ingest_cfg.jobs));
    if (fs::is_regular_file(ingest_in)) out.input(ingest_in);
    strata::IngestResult result = strata::ingest_corpus(ingest_in, ingest_cfg);
    out.write("methods.jsonl", strata::write_methods_jsonl(result.methods));
    std::cout << "methods=" << result.methods.size() << " skipped=" << result.skipped << "\n";
    for (const std::string& note : result.skip_notes) std::cout << "skip: " << note << "\n";
    out.finish(0, argv_copy);
  });

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand("stats", "subtoken frequency statistics");
  std::string stats_in, stats_out;
  stats_cmd->add_option("--in", stats_in, "methods JSONL file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--out", stats_out, "output directory")->required();
  stats_cmd->set_config("--config");
  stats_cmd->callback([&] {
    OutputDir out("stats", stats_out);
    out.config("in", stats_in);
    out.input(stats_in);
    strata::IngestResult corpus = strata::ingest_corpus(stats_in);
    strata::SubtokenStats stats = strata::compute_stats(corpus.methods);
    out.write("stats.csv", strata::write_stats_csv(stats));
    std::cout << "subtokens=" << stats.counts.size() << " total=" << stats.total << "\n";
    out.finish(0, argv_copy);
  });

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train the surrogate model");
  std::string train_in, train_out;
  strata::TrainConfig train_cfg;
  train_cmd->add_option("--in", train_in, "methods JSONL file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "output directory")->required();
  train_cmd->add_option("--dim", train_cfg.dim, "embedding dimension")->capture_default_str();
  train_cmd->add_option("--lr", train_cfg.learning_rate, "learning rate")->capture_default_str();
  train_cmd->add_option("--epochs", train_cfg.epochs, "training epochs")->capture_default_str();
  train_cmd->add_option("--init-range", train_cfg.init_range, "uniform init half-width")
      ->capture_default_str();
  train_cmd->add_option("--threshold", train_cfg.threshold, "decision threshold")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_cfg.seed, "training seed")->capture_default_str();
  train_cmd->set_config("--config");
  train_cmd->callback([&] {
    train_cfg.validate();
    OutputDir out("train", train_out);
    out.config("in", train_in);
    out.config("dim", static_cast<uint64_t>(train_cfg.dim));
    out.config("lr", train_cfg.learning_rate);
    out.config("epochs", static_cast<uint64_t>(train_cfg.epochs));
    out.config("init_range", train_cfg.init_range);
    out.config("threshold", train_cfg.threshold);
    out.input(train_in);
    strata::IngestResult corpus = strata::ingest_corpus(train_in);
    strata::TrainResult result = strata::train(corpus.methods, train_cfg);
    out.write("model.txt", strata::write_model(result.model));
    out.write("pre.emb", strata::write_embeddings(result.pre));
    out.write("post.emb", strata::write_embeddings(result.post));
    out.write("train_log.csv", strata::write_train_log_csv(result.log));
    if (!result.log.empty())
      std::cout << "final loss=" << result.log.back().loss
                << " train_f1=" << result.log.back().train_f1 << "\n";
    out.finish(train_cfg.seed, argv_copy);
  });

  // ---- drift ----
  auto* drift_cmd = app.add_subcommand("drift", "pre/post embedding drift report");
  std::string drift_pre, drift_post, drift_stats, drift_out, drift_thresholds;
  bool drift_svg = false;
  drift_cmd->add_option("--pre", drift_pre, "pre-training snapshot")->required()->check(CLI::ExistingFile);
  drift_cmd->add_option("--post", drift_post, "post-training snapshot")->required()->check(CLI::ExistingFile);
  drift_cmd->add_option("--stats", drift_stats, "stats.csv for frequency joins")
      ->required()
      ->check(CLI::ExistingFile);
  drift_cmd->add_option("--thresholds", drift_thresholds, "extra fraction-below thresholds, comma separated");
  drift_cmd->add_flag("--svg", drift_svg, "also emit drift.svg scatter");
  drift_cmd->add_option("--out", drift_out, "output directory")->required();
  drift_cmd->set_config("--config");
  drift_cmd->callback([&] {
    OutputDir out("drift", drift_out);
    out.config("pre", drift_pre);
    out.config("post", drift_post);
    out.config("stats", drift_stats);
    out.input(drift_pre);
    out.input(drift_post);
    out.input(drift_stats);
    strata::EmbeddingTable pre = strata::read_embeddings(strata::read_file(drift_pre));
    strata::EmbeddingTable post = strata::read_embeddings(strata::read_file(drift_post));
    strata::SubtokenStats stats = strata::read_stats_csv(strata::read_file(drift_stats));
    std::vector<double> extra;
    if (!drift_thresholds.empty())
      for (const std::string& t : strata::split_on(drift_thresholds, ','))
        if (!t.empty()) extra.push_back(std::stod(t));
    strata::DriftReport report = strata::drift(pre, post, stats, extra);
    out.write("drift.csv", strata::write_drift_csv(report));
    std::string fractions = "threshold,fraction\n";
    for (const auto& [threshold, fraction] : report.fraction_below)
      fractions += strata::format_sig9(threshold) + "," + strata::format_fixed(fraction, 4) + "\n";
    out.write("fractions.csv", fractions);
    if (drift_svg) {
      strata::svg::Series series;
      for (const auto& [sub, e] : report.per_subtoken) {
        series.x.push_back(std::log10(static_cast<double>(e.count) + 1.0));
        series.y.push_back(e.l2_distance);
      }
      out.write("drift.svg", strata::svg::scatter(series, "embedding drift vs subtoken frequency",
                                                  "log10(count+1)", "L2 distance"));
    }
    out.finish(0, argv_copy);
  });

  // ---- vocab ----
  auto* vocab_cmd = app.add_subcommand("vocab", "build an attack vocabulary");
  std::string vocab_mode = "l2", vocab_emb, vocab_stats, vocab_out;
  size_t vocab_n = 0;
  vocab_cmd->add_option("--mode", vocab_mode, "all|l2|frequency")->capture_default_str();
  vocab_cmd->add_option("--n", vocab_n, "cutoff (ignored for mode=all)");
  vocab_cmd->add_option("--emb", vocab_emb, "embedding snapshot (l2 mode)")->check(CLI::ExistingFile);
  vocab_cmd->add_option("--stats", vocab_stats, "stats.csv (frequency mode)")->check(CLI::ExistingFile);
  vocab_cmd->add_option("--out", vocab_out, "output directory")->required();
  vocab_cmd->set_config("--config");
  vocab_cmd->callback([&] {
    OutputDir out("vocab", vocab_out);
    out.config("mode", vocab_mode);
    out.config("n", static_cast<uint64_t>(vocab_n));
    std::optional<strata::EmbeddingTable> table;
    std::optional<strata::SubtokenStats> stats;
    std::string provenance;
    if (!vocab_emb.empty()) {
      out.input(vocab_emb);
      table = strata::read_embeddings(strata::read_file(vocab_emb));
      provenance = vocab_emb;
    }
    if (!vocab_stats.empty()) {
      out.input(vocab_stats);
      stats = strata::read_stats_csv(strata::read_file(vocab_stats));
      provenance = provenance.empty() ? vocab_stats : provenance + "+" + vocab_stats;
    }
    strata::Vocabulary v = strata::build_vocabulary(
        strata::parse_vocab_mode(vocab_mode),
        vocab_n == 0 ? std::nullopt : std::optional<size_t>(vocab_n),
        table ? &*table : nullptr, stats ? &*stats : nullptr, provenance);
    out.write("vocab.txt", strata::write_vocabulary(v));
    out.finish(0, argv_copy);
  });

  // ---- attack ----
  auto* attack_cmd = app.add_subcommand("attack", "perturb a corpus with renaming attacks");
  std::string attack_in, attack_vocab, attack_strategy = "5same", attack_target, attack_out;
  uint64_t attack_seed = 1;
  size_t attack_k = 1, attack_jobs = 0;
  attack_cmd->add_option("--in", attack_in, "methods JSONL file")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--vocab", attack_vocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--strategy", attack_strategy, "single|5diff|5same")->capture_default_str();
  attack_cmd->add_option("--seed", attack_seed, "attack seed")->capture_default_str();
  attack_cmd->add_option("--target", attack_target, "targeted subtoken t (forces 5-same of t)");
  attack_cmd->add_option("--per-method", attack_k, "perturbations per method")->capture_default_str();
  attack_cmd->add_option("--jobs", attack_jobs, "worker cap (0 = cores)")->capture_default_str();
  attack_cmd->add_option("--out", attack_out, "output directory")->required();
  attack_cmd->set_config("--config");
  attack_cmd->callback([&] {
    OutputDir out("attack", attack_out);
    out.config("in", attack_in);
    out.config("vocab", attack_vocab);
    out.config("strategy", attack_strategy);
    out.config("per_method", static_cast<uint64_t>(attack_k));
    if (!attack_target.empty()) out.config("target", attack_target);
    out.input(attack_in);
    out.input(attack_vocab);
    strata::IngestResult corpus = strata::ingest_corpus(attack_in);
    strata::AttackConfig config;
    config.strategy = strata::parse_strategy(attack_strategy);
    config.vocabulary = strata::read_vocabulary(strata::read_file(attack_vocab), attack_vocab);
    config.seed = attack_seed;
    if (!attack_target.empty()) config.target = attack_target;
    config.normalize();
    strata::AttackReport report =
        strata::attack_corpus(corpus.methods, config, attack_k, attack_jobs);
    out.write("perturbations.jsonl", strata::write_perturbations_jsonl(report.records));
    std::cout << "records=" << report.records.size() << " skips=" << report.skips.size()
              << " errors=" << report.errors.size() << "\n";
    for (const auto& s : report.errors) std::cout << "error: " << s.method_id << ": " << s.reason << "\n";
    out.finish(attack_seed, argv_copy);
  });

  // ---- advgen ----
  auto* advgen_cmd = app.add_subcommand(
      "advgen", "adversarial training set: k perturbations per strategy per method");
  std::string advgen_in, advgen_vocab, advgen_out;
  uint64_t advgen_seed = 1;
  size_t advgen_k = 5, advgen_jobs = 0;
  advgen_cmd->add_option("--in", advgen_in, "methods JSONL file")->required()->check(CLI::ExistingFile);
  advgen_cmd->add_option("--vocab", advgen_vocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  advgen_cmd->add_option("--seed", advgen_seed, "attack seed")->capture_default_str();
  advgen_cmd->add_option("--per-method", advgen_k, "perturbations per strategy per method")
      ->capture_default_str();
  advgen_cmd->add_option("--jobs", advgen_jobs, "worker cap (0 = cores)")->capture_default_str();
  advgen_cmd->add_option("--out", advgen_out, "output directory")->required();
  advgen_cmd->set_config("--config");
  advgen_cmd->callback([&] {
    OutputDir out("advgen", advgen_out);
    out.config("in", advgen_in);
    out.config("vocab", advgen_vocab);
    out.config("per_method", static_cast<uint64_t>(advgen_k));
    out.input(advgen_in);
    out.input(advgen_vocab);
    strata::IngestResult corpus = strata::ingest_corpus(advgen_in);
    strata::Vocabulary vocab = strata::read_vocabulary(strata::read_file(advgen_vocab), advgen_vocab);
    std::vector<strata::PerturbationRecord> all;
    for (strata::Strategy strategy :
         {strata::Strategy::single, strata::Strategy::five_diff, strata::Strategy::five_same}) {
      strata::AttackConfig config;
      config.strategy = strategy;
      config.vocabulary = vocab;
      config.seed = strata::derive_seed(advgen_seed, strata::strategy_name(strategy));
      strata::AttackReport report =
          strata::attack_corpus(corpus.methods, config, advgen_k, advgen_jobs);
      for (auto& r : report.records) all.push_back(std::move(r));
    }
    out.write("adv.jsonl", strata::write_perturbations_jsonl(all));
    std::cout << "records=" << all.size() << "\n";
    out.finish(advgen_seed, argv_copy);
  });

  // ---- finetune ----
  auto* finetune_cmd = app.add_subcommand("finetune", "fine-tune a model on adversarial examples");
  std::string ft_model, ft_in, ft_adv, ft_out;
  int ft_epochs = 1;
  double ft_threshold = 0.5;
  uint64_t ft_seed = 1;
  finetune_cmd->add_option("--model", ft_model, "model file")->required()->check(CLI::ExistingFile);
  finetune_cmd->add_option("--in", ft_in, "original methods JSONL (labels)")->required()->check(CLI::ExistingFile);
  finetune_cmd->add_option("--adv", ft_adv, "perturbations JSONL")->required()->check(CLI::ExistingFile);
  finetune_cmd->add_option("--epochs", ft_epochs, "fine-tune epochs")->capture_default_str();
  finetune_cmd->add_option("--threshold", ft_threshold, "decision threshold")->capture_default_str();
  finetune_cmd->add_option("--seed", ft_seed, "shuffle seed")->capture_default_str();
  finetune_cmd->add_option("--out", ft_out, "output directory")->required();
  finetune_cmd->set_config("--config");
  finetune_cmd->callback([&] {
    OutputDir out("finetune", ft_out);
    out.config("model", ft_model);
    out.config("in", ft_in);
    out.config("adv", ft_adv);
    out.config("epochs", static_cast<uint64_t>(ft_epochs));
    out.input(ft_model);
    out.input(ft_in);
    out.input(ft_adv);
    strata::SurrogateModel model = load_model_file(ft_model, ft_threshold);
    model.config.seed = ft_seed;
    strata::IngestResult corpus = strata::ingest_corpus(ft_in);
    std::vector<strata::PerturbationRecord> records =
        strata::read_perturbations_jsonl(strata::read_file(ft_adv));
    std::map<std::string, const strata::MethodUnit*> by_id;
    for (const strata::MethodUnit& m : corpus.methods) by_id[m.id] = &m;
    strata::SurrogateModel tuned =
        strata::finetune_adversarial(std::move(model), records, by_id, ft_epochs);
    out.write("model.txt", strata::write_model(tuned));
    out.finish(ft_seed, argv_copy);
  });

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "evaluate clean and perturbed F1");
  std::string eval_model, eval_in, eval_pert, eval_target, eval_out;
  double eval_threshold = 0.5;
  size_t eval_jobs = 0;
  eval_cmd->add_option("--model", eval_model, "model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--in", eval_in, "methods JSONL file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--perturbations", eval_pert, "perturbations JSONL")->check(CLI::ExistingFile);
  eval_cmd->add_option("--target", eval_target, "compute targeted success for this subtoken");
  eval_cmd->add_option("--threshold", eval_threshold, "decision threshold")->capture_default_str();
  eval_cmd->add_option("--jobs", eval_jobs, "worker cap (0 = cores)")->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "output directory")->required();
  eval_cmd->set_config("--config");
  eval_cmd->callback([&] {
    OutputDir out("eval", eval_out);
    out.config("model", eval_model);
    out.config("in", eval_in);
    if (!eval_pert.empty()) out.config("perturbations", eval_pert);
    if (!eval_target.empty()) out.config("target", eval_target);
    out.config("threshold", eval_threshold);
    out.input(eval_model);
    out.input(eval_in);
    if (!eval_pert.empty()) out.input(eval_pert);
    strata::SurrogateModel model = load_model_file(eval_model, eval_threshold);
    strata::IngestResult corpus = strata::ingest_corpus(eval_in);
    std::vector<strata::PerturbationRecord> records;
    if (!eval_pert.empty())
      records = strata::read_perturbations_jsonl(strata::read_file(eval_pert));
    std::optional<std::string> target;
    if (!eval_target.empty()) target = eval_target;
    strata::EvalReport report =
        strata::evaluate_attack(model, corpus.methods, records, target, eval_jobs);
    out.write("report.json", strata::eval_report_json(report).dump(2) + "\n");
    out.write("report.csv", strata::eval_report_csv(report));
    std::cout << "clean_f1=" << strata::format_fixed(report.f1, 4);
    for (const auto& [strategy, f1] : report.per_strategy_f1)
      std::cout << " f1_" << strategy << "=" << strata::format_fixed(f1, 4);
    std::cout << "\n";
    out.finish(0, argv_copy);
  });

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "5-same attack F1 across vocabulary cutoffs");
  std::string sweep_mode = "l2", sweep_model, sweep_stats, sweep_in, sweep_nvals, sweep_out;
  uint64_t sweep_seed = 1;
  size_t sweep_jobs = 0, sweep_k = 1;
  bool sweep_svg = false;
  double sweep_threshold = 0.5;
  sweep_cmd->add_option("--mode", sweep_mode, "l2|frequency")->capture_default_str();
  sweep_cmd->add_option("--model", sweep_model, "model file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--stats", sweep_stats, "stats.csv (frequency mode)")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--in", sweep_in, "evaluation methods JSONL")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--n-values", sweep_nvals,
                        "comma-separated cutoffs (default: powers of two up to the population)");
  sweep_cmd->add_option("--seed", sweep_seed, "attack seed")->capture_default_str();
  sweep_cmd->add_option("--per-method", sweep_k, "perturbations per method")->capture_default_str();
  sweep_cmd->add_option("--threshold", sweep_threshold, "decision threshold")->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep_jobs, "worker cap (0 = cores)")->capture_default_str();
  sweep_cmd->add_flag("--svg", sweep_svg, "also emit sweep.svg line chart");
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->set_config("--config");
  sweep_cmd->callback([&] {
    OutputDir out("sweep", sweep_out);
    out.config("mode", sweep_mode);
    out.config("model", sweep_model);
    out.config("in", sweep_in);
    if (!sweep_nvals.empty()) out.config("n_values", sweep_nvals);
    out.config("per_method", static_cast<uint64_t>(sweep_k));
    out.input(sweep_model);
    out.input(sweep_in);
    if (!sweep_stats.empty()) out.input(sweep_stats);
    strata::VocabMode mode = strata::parse_vocab_mode(sweep_mode);
    if (mode == strata::VocabMode::all)
      throw strata::ValidationError("sweep mode must be l2 or frequency");
    strata::SurrogateModel model = load_model_file(sweep_model, sweep_threshold);
    strata::IngestResult corpus = strata::ingest_corpus(sweep_in);
    std::optional<strata::SubtokenStats> stats;
    if (!sweep_stats.empty()) stats = strata::read_stats_csv(strata::read_file(sweep_stats));
    strata::SweepBundle bundle;
    bundle.model = &model;
    bundle.stats = stats ? &*stats : nullptr;
    bundle.methods = &corpus.methods;
    bundle.seed = sweep_seed;
    bundle.per_method = sweep_k;
    bundle.jobs = sweep_jobs;
    size_t population = mode == strata::VocabMode::l2
                            ? model.embeddings.vectors.size()
                            : (stats ? stats->rank_order.size() : 0);
    std::vector<size_t> n_values =
        sweep_nvals.empty() ? strata::default_sweep_grid(population) : parse_n_values(sweep_nvals);
    std::vector<strata::SweepRow> rows = strata::sweep_cutoffs(mode, n_values, bundle);
    out.write("sweep.csv", strata::write_sweep_csv(rows));
    if (sweep_svg) {
      strata::svg::Series series;
      for (const strata::SweepRow& r : rows) {
        if (!r.ok) continue;
        series.x.push_back(std::log10(static_cast<double>(r.n)));
        series.y.push_back(r.f1);
      }
      out.write("sweep.svg",
                strata::svg::line_chart(series, "5-same attack F1 vs cutoff", "log10(n)", "F1"));
    }
    for (const strata::SweepRow& r : rows)
      if (!r.ok) std::cout << "n=" << r.n << " failed: " << r.error << "\n";
    out.finish(sweep_seed, argv_copy);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const strata::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
