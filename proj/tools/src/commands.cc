#include "grantmine_cli/commands.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "grantmine/bayes_tuning.h"
#include "grantmine/error.h"
#include "grantmine/experiment.h"
#include "grantmine/model_io.h"
#include "grantmine/random.h"
#include "grantmine/report_format.h"
#include "grantmine/synthetic.h"
#include "grantmine_cli/run_config.h"
#include "json.hpp"

namespace grantmine::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Thrown for problems the user can fix in flags or config; exits kExitUsage.
class UsageError : public Error {
  using Error::Error;
};

struct Context {
  RunConfig config;
  Corpus corpus;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> echo;
  std::ostream& out;
};

void WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  body(file);
  file.flush();
  if (!file) throw Error("write to " + path.string() + " failed");
}

Json ReportJson(const EvaluationReport& r) {
  return Json{{"accuracy", r.accuracy},
              {"f1", r.f1},
              {"f1_undefined", r.f1_undefined},
              {"tp", r.confusion.tp},
              {"fp", r.confusion.fp},
              {"fn", r.confusion.fn},
              {"tn", r.confusion.tn}};
}

Json ParamsJson(const Hyperparams& p) {
  Json j{{"max_depth", nullptr},
         {"min_samples_split", p.min_samples_split},
         {"min_samples_leaf", p.min_samples_leaf},
         {"max_features", p.max_features},
         {"n_estimators", p.n_estimators},
         {"bootstrap", p.bootstrap},
         {"seed", p.seed}};
  if (p.max_depth != kUnlimitedDepth) j["max_depth"] = p.max_depth;
  return j;
}

Json Summary(const Context& ctx, std::string_view command) {
  Json config = Json::object();
  for (const auto& [key, value] : ctx.echo) config[key] = value;
  return Json{{"command", command},
              {"config_hash", ctx.config_hash},
              {"seed", ctx.config.seed},
              {"config", std::move(config)}};
}

void WriteSummary(const Context& ctx, const std::string& name, const Json& summary) {
  WriteFile(ctx.config.out / name, [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
}

std::string CorpusFingerprint(const Corpus& corpus) {
  std::string joined;
  for (const Document& d : corpus) {
    joined += SerializeDocument(d);
    joined += '\n';
  }
  return Hex64(Fnv1a64(joined));
}

double ResolveMedian(const Context& ctx) {
  if (ctx.config.median) return *ctx.config.median;
  return ComputeStatistics(ctx.corpus).median;
}

ModelConfig MakeModelConfig(const RunConfig& c) {
  return ModelConfig{c.preprocess, c.encoding, c.classifier, c.params};
}

fs::path ModelPath(const RunConfig& c) { return c.model.empty() ? c.out / "model.json" : c.model; }

ModelMetadata Metadata(const Context& ctx) {
  return ModelMetadata{ctx.config_hash, ctx.config.seed, ctx.echo};
}

void PrintStatistics(const ScoreStatistics& s, std::ostream& out) {
  out << "count " << s.count << '\n'
      << "mean " << FormatDouble(s.mean) << '\n'
      << "std " << FormatDouble(s.std) << '\n'
      << "median " << FormatDouble(s.median) << '\n'
      << "mode " << FormatDouble(s.mode) << '\n'
      << "min " << FormatDouble(s.min) << '\n'
      << "max " << FormatDouble(s.max) << '\n'
      << "q25 " << FormatDouble(s.q25) << '\n'
      << "q50 " << FormatDouble(s.q50) << '\n'
      << "q75 " << FormatDouble(s.q75) << '\n';
}

Json StatisticsJson(const ScoreStatistics& s) {
  return Json{{"count", s.count}, {"mean", s.mean}, {"std", s.std},   {"median", s.median},
              {"mode", s.mode},   {"min", s.min},   {"max", s.max},   {"q25", s.q25},
              {"q50", s.q50},     {"q75", s.q75}};
}

int CmdStats(Context& ctx) {
  const ScoreStatistics stats = ComputeStatistics(ctx.corpus);
  PrintStatistics(stats, ctx.out);
  Json summary = Summary(ctx, "stats");
  summary["statistics"] = StatisticsJson(stats);
  WriteSummary(ctx, "stats.json", summary);
  return kExitOk;
}

int CmdSynth(Context& ctx) {
  const SyntheticCorpus syn = GenerateSynthetic(ctx.config.synth);
  const fs::path corpus_path = ctx.config.out / "corpus.jsonl";
  WriteCorpus(syn.corpus, corpus_path);
  WriteFile(ctx.config.out / "planted_terms.txt", [&](std::ostream& o) {
    for (const std::string& t : syn.planted) o << t << '\n';
  });
  Json summary = Summary(ctx, "synth");
  summary["n_docs"] = syn.corpus.size();
  summary["median"] = syn.median;
  summary["planted_terms"] = syn.planted;
  summary["corpus_fingerprint"] = CorpusFingerprint(syn.corpus);
  summary["statistics"] = StatisticsJson(ComputeStatistics(syn.corpus));
  WriteSummary(ctx, "synth.json", summary);
  ctx.out << "wrote " << syn.corpus.size() << " documents to " << corpus_path.string() << '\n';
  return kExitOk;
}

int CmdCutoffSweep(Context& ctx) {
  const std::vector<CutoffSpec> specs = SelectionCutoffs();
  const double median = ResolveMedian(ctx);
  const std::vector<CutoffRow> rows =
      RunCutoffSweep(ctx.corpus, specs, ctx.config.selection, MakeModelConfig(ctx.config), median,
                     ctx.config.seed, ctx.config_hash);
  WriteFile(ctx.config.out / "cutoff_sweep.csv",
            [&](std::ostream& o) { WriteCutoffCsv(rows, ctx.config_hash, ctx.config.seed, o); });
  Json summary = Summary(ctx, "cutoff-sweep");
  summary["median"] = median;
  Json jrows = Json::array();
  bool failed = false;
  for (const CutoffRow& r : rows) {
    Json row{{"cutoff", r.spec.Name()},
             {"low_threshold", r.low_threshold},
             {"high_threshold", r.high_threshold},
             {"n_train", r.n_train},
             {"n_test", r.n_test}};
    if (r.report) {
      row["metrics"] = ReportJson(*r.report);
      ctx.out << r.spec.Name() << " accuracy " << FormatDouble(r.report->accuracy) << '\n';
    } else {
      row["error"] = r.error;
      failed = true;
    }
    jrows.push_back(std::move(row));
  }
  summary["rows"] = std::move(jrows);
  WriteSummary(ctx, "cutoff_sweep.json", summary);
  return failed ? kExitRowsFailed : kExitOk;
}

int CmdGrid(Context& ctx) {
  const RunConfig& c = ctx.config;
  GridConfig grid_config;
  grid_config.spec = c.cutoff;
  grid_config.selection = c.selection;
  grid_config.preprocess = c.preprocess;
  grid_config.forest =
      c.classifier == ClassifierKind::kRandomForest ? c.params : ProposedForestParams(c.seed);
  grid_config.tree =
      c.classifier == ClassifierKind::kDecisionTree ? c.params : DefaultTreeParams(c.seed);
  const double median = ResolveMedian(ctx);
  const GridReport grid = RunEncoderGrid(ctx.corpus, grid_config, median, c.seed, ctx.config_hash);
  WriteFile(c.out / "grid.csv",
            [&](std::ostream& o) { WriteGridCsv(grid, ctx.config_hash, c.seed, o); });

  Json summary = Summary(ctx, "grid");
  summary["median"] = median;
  summary["cutoff"] = grid.spec.Name();
  summary["n_train"] = grid.n_train;
  summary["n_test"] = grid.n_test;
  summary["forest_params"] = ParamsJson(grid_config.forest);
  summary["tree_params"] = ParamsJson(grid_config.tree);
  bool failed = false;
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const GridRow& r = grid.rows[i];
    failed |= !r.report;
    if (r.best) {
      summary["best"] = Json{{"row", i + 1},
                             {"encoding", ToString(r.scheme)},
                             {"classifier", ToString(r.kind)},
                             {"ngram", ToString(r.level)},
                             {"prune_min_total", r.prune.min_total_occurrences},
                             {"metrics", ReportJson(*r.report)}};
      ctx.out << "best row " << i + 1 << ": " << ToString(r.scheme) << ' ' << ToString(r.kind)
              << ' ' << ToString(r.level) << " prune " << r.prune.min_total_occurrences
              << " accuracy " << FormatDouble(r.report->accuracy) << '\n';
    }
  }
  summary["rows"] = grid.rows.size();
  WriteSummary(ctx, "grid.json", summary);
  return failed ? kExitRowsFailed : kExitOk;
}

Json SelectionJson(const LabeledPool& pool, const SelectionSplit& split) {
  return Json{{"low_threshold", pool.low_threshold},
              {"high_threshold", pool.high_threshold},
              {"n_low_pool", pool.low_docs.size()},
              {"n_high_pool", pool.high_docs.size()},
              {"n_moderate_pool", pool.moderate_docs.size()},
              {"n_train", split.train_ids.size()},
              {"n_heldout_test", split.heldout_test_ids.size()},
              {"n_moderate_test", split.moderate_test_ids.size()}};
}

int CmdTrain(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double median = ResolveMedian(ctx);
  const TrainedSelection t = TrainOnSelection(ctx.corpus, c.cutoff, c.selection,
                                              MakeModelConfig(c), median, c.seed, ctx.config_hash);
  const fs::path model_path = ModelPath(c);
  SaveModel(t.model, Metadata(ctx), model_path);
  WriteFile(c.out / "train_eval.csv",
            [&](std::ostream& o) { WriteEvaluationCsv(t.report, "final_test", o); });
  Json summary = Summary(ctx, "train");
  summary["median"] = median;
  summary["classifier"] = ToString(c.classifier);
  summary["params"] = ParamsJson(t.model.classifier.params());
  summary["selection"] = SelectionJson(t.pool, t.split);
  summary["n_features"] = t.model.text.n_features();
  summary["vocabulary_fingerprint"] = t.model.text.vocab().Fingerprint();
  summary["metrics"] = ReportJson(t.report);
  WriteSummary(ctx, "train.json", summary);
  ctx.out << "accuracy " << FormatDouble(t.report.accuracy) << " f1 " << FormatDouble(t.report.f1)
          << '\n'
          << "model written to " << model_path.string() << '\n';
  return kExitOk;
}

int CmdTune(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double median = ResolveMedian(ctx);
  const LabeledPool pool = RankAndCut(ctx.corpus, c.cutoff);
  const SelectionSplit split = BuildSelectionSplit(ctx.corpus, pool, c.selection, median, c.seed);
  const LabeledDocuments train = Collect(ctx.corpus, split.train_ids, split.labels);
  const std::vector<std::string> test_ids = split.TestIds();
  const LabeledDocuments test = Collect(ctx.corpus, test_ids, split.labels);

  PipelineModel model;
  model.text = TextPipeline::Fit(train.docs, c.preprocess, c.encoding);
  const Dataset train_data = EncodeDataset(model.text, train.docs, train.labels);
  const ParamSpace space = SearchSpaceFor(c.classifier);
  const TuneResult tuned = Optimize(
      [&](std::span<const double> point) {
        return CrossValScore(train_data, c.classifier, ApplyPoint(space, point, c.params),
                             c.tune.folds, c.seed);
      },
      space, c.tune);
  const Hyperparams best = ApplyPoint(space, tuned.best_point, c.params);
  model.classifier = Classifier::Fit(c.classifier, train_data, best);
  const EvaluationReport report =
      Evaluate(model.classifier, EncodeDataset(model.text, test.docs, test.labels),
               ctx.config_hash, c.seed);

  const fs::path model_path = ModelPath(c);
  SaveModel(model, Metadata(ctx), model_path);
  WriteFile(c.out / "tune_trace.csv", [&](std::ostream& o) {
    WriteTuneTrace(tuned, space, ctx.config_hash, c.seed, o);
  });
  WriteFile(c.out / "tune_eval.csv",
            [&](std::ostream& o) { WriteEvaluationCsv(report, "final_test", o); });
  Json summary = Summary(ctx, "tune");
  summary["median"] = median;
  summary["classifier"] = ToString(c.classifier);
  summary["selection"] = SelectionJson(pool, split);
  Json point = Json::object();
  for (std::size_t i = 0; i < space.size(); ++i) point[space.dims()[i].name] = tuned.best_point[i];
  summary["best_point"] = std::move(point);
  summary["best_cv_accuracy"] = tuned.best_score;
  summary["evaluations"] = tuned.history.size();
  summary["params"] = ParamsJson(best);
  summary["metrics"] = ReportJson(report);
  WriteSummary(ctx, "tune.json", summary);
  ctx.out << "best cv accuracy " << FormatDouble(tuned.best_score) << " test accuracy "
          << FormatDouble(report.accuracy) << '\n';
  return kExitOk;
}

int CmdModerate(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double median = ResolveMedian(ctx);
  PipelineModel model;
  Json summary = Summary(ctx, "moderate");
  if (!c.model.empty()) {
    if (!fs::exists(c.model)) throw UsageError("model " + c.model.string() + " does not exist");
    LoadedModel loaded = LoadModel(c.model);
    model = std::move(loaded.model);
    summary["base_model"] = Json{{"config_hash", loaded.metadata.config_hash},
                                 {"seed", loaded.metadata.seed}};
  } else {
    TrainedSelection t = TrainOnSelection(ctx.corpus, c.cutoff, c.selection, MakeModelConfig(c),
                                          median, c.seed, ctx.config_hash);
    SaveModel(t.model, Metadata(ctx), c.out / "model.json");
    summary["base_model"] = Json{{"config_hash", ctx.config_hash},
                                 {"seed", c.seed},
                                 {"selection", SelectionJson(t.pool, t.split)},
                                 {"metrics", ReportJson(t.report)}};
    model = std::move(t.model);
  }

  const std::vector<ModerateRange> ranges = ModerateRanges();
  const std::vector<ModerateRow> rows =
      RunModerateSweep(ctx.corpus, model, ranges, median, c.seed, ctx.config_hash);
  WriteFile(c.out / "moderate.csv",
            [&](std::ostream& o) { WriteModerateCsv(rows, ctx.config_hash, c.seed, o); });

  summary["median"] = median;
  Json jrows = Json::array();
  bool failed = false;
  for (const ModerateRow& r : rows) {
    Json row{{"range", r.range.Name()}, {"n_low", r.n_low}, {"n_high", r.n_high}};
    if (r.report) {
      row["metrics"] = ReportJson(*r.report);
      ctx.out << r.range.Name() << " accuracy " << FormatDouble(r.report->accuracy) << '\n';
    } else {
      row["error"] = r.error;
      failed = true;
    }
    jrows.push_back(std::move(row));
  }
  summary["rows"] = std::move(jrows);
  try {
    const MedianProportion mp = ComputeMedianProportion(ctx.corpus, model, median);
    summary["median_proportion"] =
        Json{{"n_docs", mp.n_docs}, {"frac_high", mp.frac_high}, {"frac_low", mp.frac_low}};
    ctx.out << "median documents " << mp.n_docs << ": high " << FormatDouble(mp.frac_high)
            << " low " << FormatDouble(mp.frac_low) << '\n';
  } catch (const Error& e) {
    summary["median_proportion"] = Json{{"error", e.what()}};
  }
  WriteSummary(ctx, "moderate.json", summary);
  return failed ? kExitRowsFailed : kExitOk;
}

int CmdTopFeatures(Context& ctx) {
  const fs::path model_path = ModelPath(ctx.config);
  if (!fs::exists(model_path)) throw UsageError("model " + model_path.string() + " does not exist");
  const LoadedModel loaded = LoadModel(model_path);
  const TopFeatures top = TopKFeatures(loaded.model.classifier.Importances(),
                                       loaded.model.text.vocab(), ctx.config.top_k);
  WriteFile(ctx.config.out / "top_features.csv", [&](std::ostream& o) {
    WriteTopFeaturesCsv(top, loaded.metadata.config_hash, loaded.metadata.seed, o);
  });
  Json summary = Summary(ctx, "top-features");
  summary["model_config_hash"] = loaded.metadata.config_hash;
  summary["model_seed"] = loaded.metadata.seed;
  summary["k"] = ctx.config.top_k;
  summary["returned"] = top.features.size();
  summary["nonzero_count"] = top.nonzero_count;
  WriteSummary(ctx, "top_features.json", summary);
  ctx.out << top.features.size() << " of " << top.nonzero_count
          << " features with nonzero importance\n";
  return kExitOk;
}

struct CommandSpec {
  const char* name;
  const char* help;
  bool needs_corpus;
  int (*run)(Context&);
};

constexpr CommandSpec kCommands[] = {
    {"stats", "Print IC-score statistics of a corpus", true, CmdStats},
    {"synth", "Generate a synthetic corpus with planted terms", false, CmdSynth},
    {"cutoff-sweep", "Train and test at each selection cutoff", true, CmdCutoffSweep},
    {"grid", "Evaluate all 36 encoder and classifier combinations", true, CmdGrid},
    {"train", "Train one model on a selection split and save it", true, CmdTrain},
    {"tune", "Bayesian-optimize hyperparameters by cross-validation", true, CmdTune},
    {"moderate", "Score moderate-range documents with a base model", true, CmdModerate},
    {"top-features", "List the most important terms of a saved model", false, CmdTopFeatures},
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text classification of grant proposals by IC score", "grantmine"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;
  auto flag = [&](CLI::App* target, const std::string& name, const std::string& key,
                  const std::string& help) {
    target->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--set", assignments, "Override a setting: section.key=value");
  flag(&app, "--seed", "run.seed", "Top-level random seed");
  flag(&app, "--out", "run.out", "Output directory");
  flag(&app, "--corpus", "corpus.path", "Corpus JSONL file");
  flag(&app, "--model", "model.path", "Model JSON file");
  flag(&app, "--grant-type", "corpus.grant_type", "Keep only this grant type");
  flag(&app, "--section", "corpus.section", "Keep only this section");

  std::map<std::string, CLI::App*> subcommands;
  for (const CommandSpec& spec : kCommands) subcommands[spec.name] = app.add_subcommand(spec.name, spec.help);
  flag(subcommands["synth"], "--n-docs", "synth.n_docs", "Number of documents");
  flag(subcommands["synth"], "--signal", "synth.signal_strength", "Planted-term probability");
  flag(subcommands["synth"], "--planted", "synth.planted_terms", "Number of planted terms");
  for (const char* name : {"cutoff-sweep", "train", "tune", "moderate"}) {
    flag(subcommands[name], "--classifier", "model.classifier", "rf or dt");
    flag(subcommands[name], "--encoding", "encoding.scheme", "tfidf or idf-presence");
    flag(subcommands[name], "--ngram", "encoding.ngram", "unigram, bigram or trigram");
  }
  flag(subcommands["tune"], "--init-points", "tuning.init_points", "Random initial evaluations");
  flag(subcommands["tune"], "--n-iter", "tuning.n_iter", "Acquisition steps");
  flag(subcommands["top-features"], "--k", "top_features.k", "Number of terms to list");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "grantmine: error: " << e.what() << '\n';
    return kExitUsage;
  }

  const CommandSpec* command = nullptr;
  for (const CommandSpec& spec : kCommands) {
    if (subcommands[spec.name]->parsed()) command = &spec;
  }

  std::optional<Context> ctx;
  try {
    Settings settings;
    if (!config_path.empty()) settings.MergeIni(config_path);
    for (const std::string& a : assignments) settings.MergeAssignment(a);
    for (const auto& [key, value] : flags) settings.Set(key, value);
    RunConfig config = Resolve(settings);

    Corpus corpus;
    std::vector<std::pair<std::string, std::string>> echo = config.echo;
    if (command->needs_corpus) {
      if (config.corpus.empty()) throw UsageError(std::string(command->name) + " needs --corpus");
      if (!fs::exists(config.corpus)) {
        throw UsageError("corpus " + config.corpus.string() + " does not exist");
      }
      corpus = FilterBy(LoadCorpus(config.corpus), config.grant_type, config.section);
      echo.emplace_back("corpus.fingerprint", CorpusFingerprint(corpus));
    }
    fs::create_directories(config.out);
    const std::string hash = ConfigHash(echo);
    ctx.emplace(Context{std::move(config), std::move(corpus), hash, std::move(echo), out});
  } catch (const std::exception& e) {
    err << "grantmine: error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const int code = command->run(*ctx);
    if (code == kExitRowsFailed) err << "grantmine: some rows failed; see the report\n";
    return code;
  } catch (const UsageError& e) {
    err << "grantmine: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "grantmine: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace grantmine::cli
