// aspect-lab command line: extract -> indicators -> train -> evaluate,
// plus synthetic corpus generation and a one-shot pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aspectlab/corpus.hpp"
#include "aspectlab/errors.hpp"
#include "aspectlab/eval.hpp"
#include "aspectlab/extractor.hpp"
#include "aspectlab/indicators.hpp"
#include "aspectlab/learners.hpp"
#include "aspectlab/model_io.hpp"
#include "aspectlab/rng.hpp"
#include "aspectlab/synth.hpp"
#include "aspectlab/version.hpp"

namespace fs = std::filesystem;
using namespace aspectlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ClauseFileFormat format_from_path(const fs::path& p) {
  return p.extension() == ".tsv" ? ClauseFileFormat::Tsv : ClauseFileFormat::Jsonl;
}

std::set<std::string> parse_lemma_list(const std::string& csv) {
  std::set<std::string> out;
  std::istringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

Fraction parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw UsageError("--train-fraction must look like N/D");
  Fraction f;
  try {
    f.num = std::stoull(text.substr(0, slash));
    f.den = std::stoull(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw UsageError("--train-fraction must look like N/D");
  }
  if (f.num == 0 || f.num >= f.den) {
    throw UsageError("--train-fraction must be strictly between 0 and 1");
  }
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + dir.string());
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
}

std::string meta_header(const std::string& subcommand, const std::string& config,
                        std::optional<std::uint64_t> seed) {
  std::ostringstream meta;
  meta << "aspect-lab " << kVersion << '\n';
  meta << "subcommand: " << subcommand << '\n';
  if (seed) meta << "seed: " << *seed << '\n';
  if (!config.empty()) meta << "config: " << config;
  return meta.str();
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

struct TrainedModel {
  std::string name;
  Model model;
};

std::string describe_frozen_threshold(const TrainedModel& tm) {
  std::ostringstream out;
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, ThresholdModel>) {
          out << tm.name << ": indicator=" << indicator_name(model.indicator_index)
              << " threshold=" << model.threshold << " state_side="
              << (model.state_side == StateSide::AtOrAbove ? "at_or_above" : "below");
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          out << tm.name << ": output_threshold=" << model.output_threshold
              << (model.converged_by_cap ? " (converged_by_cap)" : "");
        } else if constexpr (std::is_same_v<T, FunctionTree>) {
          out << tm.name << ": output_threshold=" << model.output_threshold << " state_side="
              << (model.state_side == StateSide::AtOrAbove ? "at_or_above" : "below");
        } else {
          out << tm.name << ": " << model.nodes.size() << " nodes";
        }
      },
      tm.model);
  return out.str();
}

int best_single_indicator(const std::vector<LabeledExample>& train) {
  int best = 0;
  double best_acc = -1.0;
  for (int i = 0; i < kNumIndicators; ++i) {
    const double acc = fit_threshold(train, i).train_accuracy;
    if (acc > best_acc) {
      best_acc = acc;
      best = i;
    }
  }
  return best;
}

std::vector<TrainedModel> train_models(const std::vector<LabeledExample>& train,
                                       const std::string& learner,
                                       std::optional<int> indicator_override,
                                       std::uint64_t gp_seed, const GPConfig& gp_base) {
  std::vector<TrainedModel> models;
  const bool all = learner == "all";

  std::optional<LinearModel> linear;  // shared by loglinear + gp polarity
  auto fit_linear_once = [&]() -> const LinearModel& {
    if (!linear) linear = fit_loglinear(train).model;
    return *linear;
  };

  if (all) {
    models.push_back({"baseline", baseline_classifier(train)});
  }
  if (learner == "threshold") {
    const int idx = indicator_override.value_or(best_single_indicator(train));
    models.push_back({"threshold_" + std::string(indicator_name(idx)),
                      fit_threshold(train, idx).model});
  } else if (all) {
    for (const int idx : {0, 1 + static_cast<int>(kNotNever)}) {
      models.push_back({"threshold_" + std::string(indicator_name(idx)),
                        fit_threshold(train, idx).model});
    }
  }
  if (learner == "loglinear" || all) {
    models.push_back({"loglinear", fit_linear_once()});
  }
  if (learner == "gp" || all) {
    GPConfig cfg = gp_base;
    cfg.seed = gp_seed;
    models.push_back(
        {"gptree", gp_evolve(train, cfg, polarity_from_linear(fit_linear_once())).tree});
  }
  if (learner == "dtree" || all) {
    models.push_back({"dtree", fit_decision_tree(train)});
  }
  if (!all && learner != "threshold" && learner != "loglinear" && learner != "gp" &&
      learner != "dtree") {
    throw UsageError("unknown learner: " + learner);
  }
  // evaluate needs the baseline for significance rows
  if (!all) models.push_back({"baseline", baseline_classifier(train)});
  return models;
}

std::string significance_tsv(const std::vector<EvalReport>& reports,
                             const std::vector<LabeledExample>& test,
                             const std::string& meta) {
  std::ostringstream out;
  if (!meta.empty()) {
    std::istringstream lines(meta);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  std::vector<Label> gold;
  gold.reserve(test.size());
  for (const auto& ex : test) gold.push_back(ex.y);

  out << "model_a\tmodel_b\ta_correct_b_wrong\tb_correct_a_wrong\tn_disagreements\tp_value\n";
  char buf[64];
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      const McNemarResult r =
          paired_significance(reports[i].predictions, reports[j].predictions, gold);
      std::snprintf(buf, sizeof buf, "%.6g", r.p);
      out << reports[i].name << '\t' << reports[j].name << '\t' << r.b << '\t' << r.c
          << '\t' << r.n_disagreements << '\t' << buf << '\n';
    }
  }
  return out.str();
}

void attach_baseline_significance(std::vector<EvalReport>& reports,
                                  const std::vector<LabeledExample>& test) {
  const EvalReport* baseline = nullptr;
  for (const auto& r : reports) {
    if (r.name == "baseline") baseline = &r;
  }
  if (!baseline) return;
  std::vector<Label> gold;
  gold.reserve(test.size());
  for (const auto& ex : test) gold.push_back(ex.y);
  for (auto& r : reports) {
    if (r.name == "baseline") continue;
    const McNemarResult mc =
        paired_significance(r.predictions, baseline->predictions, gold);
    r.significance = SignificanceEntry{"exact_mcnemar", "baseline", mc.p, mc.n_disagreements};
  }
}

void emit_results(const fs::path& outdir, const std::vector<EvalReport>& reports,
                  const std::vector<LabeledExample>& test, const std::string& meta,
                  const std::string& echo_format) {
  write_text_file(outdir / "results.tsv", results_report_tsv(reports, meta));
  write_text_file(outdir / "results.txt", results_report_text(reports, meta));
  write_text_file(outdir / "results.json", results_report_json(reports, meta));
  write_text_file(outdir / "significance.tsv", significance_tsv(reports, test, meta));
  if (echo_format == "tsv") std::cout << results_report_tsv(reports, meta);
  else if (echo_format == "json") std::cout << results_report_json(reports, meta);
  else std::cout << results_report_text(reports, meta);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string input;
  std::string output_dir;
  std::string format = "text";
  std::string exclude_lemmas = "be,have";
  std::string lexicons;
  std::optional<std::uint64_t> seed;
};

int run_extract(const CommonOpts& opts, int duration_window) {
  const MarkerLexicons lex =
      opts.lexicons.empty() ? default_lexicons() : load_lexicons(opts.lexicons);
  const auto tagged = load_tagged_clauses(opts.input);
  ClauseSet cs;
  cs.provenance = opts.input;
  ExtractorOptions xopts;
  xopts.duration_window = duration_window;
  for (const auto& tc : tagged) cs.records.push_back(detect_markers(tc, lex, xopts));

  ensure_dir(opts.output_dir);
  write_clauses(cs, fs::path(opts.output_dir) / "clauses.jsonl", ClauseFileFormat::Jsonl);
  std::cout << "extracted " << cs.records.size() << " clauses\n";
  return kExitOk;
}

int run_indicators(const CommonOpts& opts) {
  SplitConfig cfg;
  cfg.exclude_lemmas = parse_lemma_list(opts.exclude_lemmas);
  const ClauseSet raw = load_clauses(opts.input, format_from_path(opts.input));
  const ClauseSet corpus = filter_clauses(raw, cfg);
  const VerbVectors vectors = to_indicator_vectors(build_profiles(corpus));

  ensure_dir(opts.output_dir);
  const std::string meta = meta_header(
      "indicators", "input=" + opts.input + " exclude=" + opts.exclude_lemmas, opts.seed);
  write_vectors_tsv(vectors, fs::path(opts.output_dir) / "vectors.tsv", meta);

  ClauseSet labeled;
  labeled.provenance = corpus.provenance;
  std::uint64_t n_state = 0, n_event = 0;
  for (const auto& rec : corpus.records) {
    if (rec.gold_label == Label::Unlabeled) continue;
    (rec.gold_label == Label::State ? n_state : n_event)++;
    labeled.records.push_back(rec);
  }
  if (n_state >= 2 && n_event >= 2) {
    const IndicatorStats stats = compute_indicator_stats(labeled, vectors);
    write_text_file(fs::path(opts.output_dir) / "indicator_report.tsv",
                    indicator_table_tsv(stats, meta));
    write_text_file(fs::path(opts.output_dir) / "indicator_report.txt",
                    indicator_table_text(stats, meta));
    std::cout << indicator_table_text(stats, meta);
  } else {
    std::cerr << "too few labeled clauses for class statistics; wrote vectors only\n";
  }
  return kExitOk;
}

int run_train(const CommonOpts& opts, const std::string& learner,
              const std::string& indicator, const std::string& corpus_path,
              const std::string& vectors_path, GPConfig gp_base) {
  if ((learner == "gp" || learner == "all") && !opts.seed) {
    throw UsageError("--seed is required for --learner gp and --learner all");
  }
  const ClauseSet train_set = load_clauses(opts.input, format_from_path(opts.input));

  VerbVectors vectors;
  if (!vectors_path.empty()) {
    vectors = load_vectors_tsv(vectors_path);
  } else {
    const std::string source = corpus_path.empty() ? opts.input : corpus_path;
    SplitConfig cfg;
    cfg.exclude_lemmas = parse_lemma_list(opts.exclude_lemmas);
    const ClauseSet corpus =
        filter_clauses(load_clauses(source, format_from_path(source)), cfg);
    vectors = to_indicator_vectors(build_profiles(corpus));
  }
  const auto examples = make_examples(train_set, vectors);

  std::optional<int> indicator_override;
  if (!indicator.empty()) {
    const int idx = indicator_index_by_name(indicator);
    if (idx < 0) throw UsageError("unknown indicator: " + indicator);
    indicator_override = idx;
  }

  const std::uint64_t gp_seed = opts.seed ? SplitMix64(*opts.seed).next_u64() : 0;
  const auto models =
      train_models(examples, learner, indicator_override, gp_seed, gp_base);

  ensure_dir(opts.output_dir);
  for (const auto& tm : models) {
    save_model(tm.model, fs::path(opts.output_dir) / ("model_" + tm.name + ".json"));
    std::cout << describe_frozen_threshold(tm) << '\n';
  }
  return kExitOk;
}

int run_evaluate(const CommonOpts& opts, const std::vector<std::string>& model_paths,
                 const std::string& vectors_path) {
  const ClauseSet test_set = load_clauses(opts.input, format_from_path(opts.input));
  VerbVectors vectors;
  if (!vectors_path.empty()) {
    vectors = load_vectors_tsv(vectors_path);
  } else {
    SplitConfig cfg;
    cfg.exclude_lemmas = parse_lemma_list(opts.exclude_lemmas);
    vectors = to_indicator_vectors(build_profiles(filter_clauses(test_set, cfg)));
  }
  const auto examples = make_examples(test_set, vectors);

  std::vector<EvalReport> reports;
  std::ostringstream model_list;
  for (const auto& path : model_paths) {
    std::string name = fs::path(path).stem().string();
    if (name.rfind("model_", 0) == 0) name = name.substr(6);
    reports.push_back(evaluate(load_model(path), examples, name));
    model_list << (model_list.tellp() > 0 ? "," : "") << name;
  }
  attach_baseline_significance(reports, examples);

  ensure_dir(opts.output_dir);
  const std::string meta = meta_header(
      "evaluate", "input=" + opts.input + " models=" + model_list.str(), opts.seed);
  emit_results(opts.output_dir, reports, examples, meta, opts.format);
  return kExitOk;
}

int run_synth(const CommonOpts& opts, const std::string& spec_path) {
  SynthSpec spec;
  if (!spec_path.empty() && spec_path != "default") spec = load_synth_spec(spec_path);
  if (opts.seed) spec.seed = *opts.seed;

  const SynthResult result = generate_corpus(spec);
  ensure_dir(opts.output_dir);
  write_clauses(result.clauses, fs::path(opts.output_dir) / "corpus.jsonl",
                ClauseFileFormat::Jsonl);
  std::ostringstream cfg;
  cfg << "n_clauses=" << spec.n_clauses << " n_verbs=" << spec.n_verbs
      << " state_prior=" << spec.state_prior << " zipf=" << spec.zipf_exponent
      << " ambiguity=" << spec.ambiguity_rate;
  write_truth_tsv(result.truth, fs::path(opts.output_dir) / "truth.tsv",
                  meta_header("synth", cfg.str(), spec.seed));
  std::cout << "wrote " << result.clauses.records.size() << " clauses, "
            << result.truth.size() << " verbs\n";
  return kExitOk;
}

int run_pipeline(const CommonOpts& opts, const std::string& synth_spec,
                 const std::string& train_fraction, GPConfig gp_base) {
  if (!opts.seed) throw UsageError("--seed is required for pipeline");
  SplitMix64 root(*opts.seed);
  const std::uint64_t synth_seed = root.next_u64();
  const std::uint64_t split_seed = root.next_u64();
  const std::uint64_t gp_seed = root.next_u64();

  ensure_dir(opts.output_dir);

  // corpus: synthetic or from disk
  ClauseSet raw;
  if (!synth_spec.empty()) {
    SynthSpec spec;
    if (synth_spec != "default") spec = load_synth_spec(synth_spec);
    spec.seed = synth_seed;
    SynthResult synth = generate_corpus(spec);
    write_clauses(synth.clauses, fs::path(opts.output_dir) / "corpus.jsonl",
                  ClauseFileFormat::Jsonl);
    write_truth_tsv(synth.truth, fs::path(opts.output_dir) / "truth.tsv",
                    meta_header("pipeline/synth", "spec=" + synth_spec, *opts.seed));
    raw = std::move(synth.clauses);
  } else {
    if (opts.input.empty()) throw UsageError("pipeline needs --synth or --input");
    raw = load_clauses(opts.input, format_from_path(opts.input));
  }

  SplitConfig split_cfg;
  split_cfg.seed = split_seed;
  split_cfg.exclude_lemmas = parse_lemma_list(opts.exclude_lemmas);
  split_cfg.train_fraction = parse_fraction(train_fraction);

  const ClauseSet corpus = filter_clauses(raw, split_cfg);
  const VerbVectors vectors = to_indicator_vectors(build_profiles(corpus));

  std::ostringstream cfg;
  cfg << "synth=" << (synth_spec.empty() ? "-" : synth_spec)
      << " input=" << (opts.input.empty() ? "-" : opts.input)
      << " exclude=" << opts.exclude_lemmas << " train_fraction=" << train_fraction
      << " gp_population=" << gp_base.population_size
      << " gp_budget=" << gp_base.evaluation_budget;
  const std::string meta = meta_header("pipeline", cfg.str(), *opts.seed);

  write_vectors_tsv(vectors, fs::path(opts.output_dir) / "vectors.tsv", meta);

  const auto [train_set, test_set] = split_train_test(corpus, split_cfg);
  const IndicatorStats stats = compute_indicator_stats(train_set, vectors);
  write_text_file(fs::path(opts.output_dir) / "indicator_report.tsv",
                  indicator_table_tsv(stats, meta));
  write_text_file(fs::path(opts.output_dir) / "indicator_report.txt",
                  indicator_table_text(stats, meta));

  const auto train_examples = make_examples(train_set, vectors);
  const auto test_examples = make_examples(test_set, vectors);

  const auto models = train_models(train_examples, "all", std::nullopt, gp_seed, gp_base);
  for (const auto& tm : models) {
    save_model(tm.model, fs::path(opts.output_dir) / ("model_" + tm.name + ".json"));
  }

  std::vector<EvalReport> reports;
  // display order: combined learners, single-indicator thresholds, baseline
  for (const char* name : {"dtree", "gptree", "loglinear", "threshold_frequency",
                           "threshold_not_never", "baseline"}) {
    for (const auto& tm : models) {
      if (tm.name == name) reports.push_back(evaluate(tm.model, test_examples, tm.name));
    }
  }
  attach_baseline_significance(reports, test_examples);
  emit_results(opts.output_dir, reports, test_examples, meta, opts.format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aspect-lab: corpus indicators and learners for stative/event verb "
               "classification"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("--input", opts.input, "input file");
    sub->add_option("--output-dir", opts.output_dir, "output directory")->required();
    sub->add_option("--format", opts.format, "stdout format: text|tsv|json")
        ->check(CLI::IsMember({"text", "tsv", "json"}));
    sub->add_option("--exclude-lemmas", opts.exclude_lemmas,
                    "comma-separated lemmas to drop (default be,have)");
    auto* seed_opt = sub->add_option("--seed", seed_value, "random seed");
    sub->callback([&, seed_opt] {
      if (seed_opt->count() > 0) opts.seed = seed_value;
    });
    return sub;
  };

  // extract
  int duration_window = 3;
  auto* extract = add_common(app.add_subcommand("extract", "tagged clauses -> clause records"),
                             true);
  extract->add_option("--lexicons", opts.lexicons, "marker lexicon file");
  extract->add_option("--duration-window", duration_window,
                      "token window for duration PPs");

  // indicators
  add_common(app.add_subcommand("indicators",
                                "clauses -> verb vectors and indicator statistics"),
             true);

  // train
  std::string learner = "all";
  std::string indicator;
  std::string corpus_path;
  std::string vectors_path;
  GPConfig gp_base;
  auto* train = add_common(app.add_subcommand("train", "labeled clauses -> models"), true);
  train->add_option("--learner", learner, "threshold|loglinear|gp|dtree|all")
      ->check(CLI::IsMember({"threshold", "loglinear", "gp", "dtree", "all"}));
  train->add_option("--indicator", indicator, "indicator for --learner threshold");
  train->add_option("--corpus", corpus_path, "full corpus for indicator vectors");
  train->add_option("--vectors", vectors_path, "precomputed vectors TSV");
  train->add_option("--gp-population", gp_base.population_size, "GP population size");
  train->add_option("--gp-budget", gp_base.evaluation_budget, "GP evaluation budget");

  // evaluate
  std::vector<std::string> model_paths;
  auto* evaluate_cmd =
      add_common(app.add_subcommand("evaluate", "models + test clauses -> reports"), true);
  evaluate_cmd->add_option("--models", model_paths, "model JSON files")->required();
  evaluate_cmd->add_option("--vectors", vectors_path, "precomputed vectors TSV");

  // synth
  std::string spec_path = "default";
  auto* synth = add_common(app.add_subcommand("synth", "generate a synthetic corpus"), false);
  synth->add_option("--spec", spec_path, "synth spec JSON, or 'default'");

  // pipeline
  std::string synth_spec;
  std::string train_fraction = "1/2";
  auto* pipeline =
      add_common(app.add_subcommand("pipeline", "synth/load -> split -> train -> evaluate"),
                 true);
  pipeline->add_option("--synth", synth_spec, "synth spec JSON or 'default'");
  pipeline->add_option("--train-fraction", train_fraction, "e.g. 1/2");
  pipeline->add_option("--gp-population", gp_base.population_size, "GP population size");
  pipeline->add_option("--gp-budget", gp_base.evaluation_budget, "GP evaluation budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitUsage;
  }

  try {
    if (extract->parsed()) return run_extract(opts, duration_window);
    if (app.get_subcommand("indicators")->parsed()) return run_indicators(opts);
    if (train->parsed()) {
      return run_train(opts, learner, indicator, corpus_path, vectors_path, gp_base);
    }
    if (evaluate_cmd->parsed()) return run_evaluate(opts, model_paths, vectors_path);
    if (synth->parsed()) return run_synth(opts, spec_path);
    if (pipeline->parsed()) return run_pipeline(opts, synth_spec, train_fraction, gp_base);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help() << std::flush;
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
