#include "grantmine/experiment.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>

#include "grantmine/error.h"
#include "grantmine/random.h"
#include "grantmine/report_format.h"

namespace grantmine {
namespace {

std::string Percent(double fraction) {
  return std::to_string(static_cast<int>(std::lround(fraction * 100.0)));
}

std::size_t FloorCount(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

// Uniform sample of min(k, |ids|) ids without replacement, in draw order.
std::vector<std::string> Sample(std::vector<std::string> ids, std::size_t k, Rng& rng) {
  k = std::min(k, ids.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(ids[i], ids[i + UniformIndex(rng, ids.size() - i)]);
  }
  ids.resize(k);
  return ids;
}

struct ScoredIndex {
  double score;
  std::size_t index;
};

std::vector<ScoredIndex> RankValid(const Corpus& corpus) {
  std::vector<ScoredIndex> ranked;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].HasValidScore()) ranked.push_back({*corpus[i].ic_score, i});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredIndex& a, const ScoredIndex& b) { return a.score < b.score; });
  return ranked;
}

std::vector<double> ScoresOf(std::span<const ScoredIndex> ranked) {
  std::vector<double> scores;
  scores.reserve(ranked.size());
  for (const ScoredIndex& r : ranked) scores.push_back(r.score);
  return scores;
}

Dataset EncodeTokenized(const TextPipeline& pipeline, std::span<const TokenizedDocument> docs,
                        std::span<const Label> labels) {
  Dataset data;
  data.n_features = pipeline.n_features();
  data.rows.reserve(docs.size());
  for (const TokenizedDocument& d : docs) data.rows.push_back(pipeline.Encode(d));
  data.labels.assign(labels.begin(), labels.end());
  return data;
}

void WriteMetrics(const std::optional<EvaluationReport>& r, std::ostream& out) {
  if (!r) {
    out << ",,,,,,";
    return;
  }
  const ConfusionMatrix& cm = r->confusion;
  out << FormatDouble(r->accuracy) << ',' << FormatDouble(r->f1) << ','
      << (r->f1_undefined ? 1 : 0) << ',' << cm.tp << ',' << cm.fp << ',' << cm.fn << ','
      << cm.tn;
}

constexpr std::string_view kMetricColumns = "accuracy,f1,f1_undefined,tp,fp,fn,tn";

}  // namespace

void CutoffSpec::Validate() const {
  if (!(low_pct > 0.0 && low_pct < high_pct && high_pct < 1.0)) {
    throw Error("cutoff " + Name() + " must satisfy 0 < low < high < 1");
  }
}

std::string CutoffSpec::Name() const { return Percent(low_pct) + "-" + Percent(high_pct); }

std::vector<CutoffSpec> SelectionCutoffs() {
  return {{0.15, 0.85}, {0.20, 0.80}, {0.25, 0.75}, {0.30, 0.70}, {0.35, 0.65}, {0.40, 0.60}};
}

LabeledPool RankAndCut(const Corpus& corpus, const CutoffSpec& spec) {
  spec.Validate();
  const std::vector<ScoredIndex> ranked = RankValid(corpus);
  if (ranked.size() < 10) {
    throw Error("cutoff " + spec.Name() + " needs at least 10 scored documents, got " +
                std::to_string(ranked.size()));
  }
  const std::vector<double> scores = ScoresOf(ranked);
  LabeledPool pool;
  pool.low_threshold = NearestRank(scores, spec.low_pct);
  pool.high_threshold = NearestRank(scores, spec.high_pct);
  for (const ScoredIndex& r : ranked) {
    const std::string& id = corpus[r.index].id;
    if (r.score < pool.low_threshold) {
      pool.low_docs.push_back(id);
    } else if (r.score > pool.high_threshold) {
      pool.high_docs.push_back(id);
    } else {
      pool.moderate_docs.push_back(id);
    }
  }
  if (pool.low_docs.empty() || pool.high_docs.empty()) {
    throw Error("cutoff " + spec.Name() + " leaves an empty " +
                (pool.low_docs.empty() ? "low" : "high") + " pool");
  }
  return pool;
}

void SelectionConfig::Validate() const {
  if (per_class < 1) throw Error("per_class must be >= 1");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw Error("train_frac must lie in (0, 1)");
  if (!(moderate_frac >= 0.0 && moderate_frac <= 1.0)) {
    throw Error("moderate_frac must lie in [0, 1]");
  }
}

std::vector<std::string> SelectionSplit::TestIds() const {
  std::vector<std::string> ids = heldout_test_ids;
  ids.insert(ids.end(), moderate_test_ids.begin(), moderate_test_ids.end());
  return ids;
}

std::optional<Label> MedianLabel(double score, double median) {
  if (score > median) return Label::kHigh;
  if (score < median) return Label::kLow;
  return std::nullopt;
}

SelectionSplit BuildSelectionSplit(const Corpus& corpus, const LabeledPool& pool,
                                   const SelectionConfig& config, double median,
                                   std::uint64_t seed) {
  config.Validate();
  if (pool.low_docs.empty() || pool.high_docs.empty()) {
    throw Error("selection split needs nonempty low and high pools");
  }
  Rng rng = MakeRng(seed, 0);
  SelectionSplit split;
  split.seed = seed;
  for (Label label : {Label::kLow, Label::kHigh}) {
    const auto& members = label == Label::kLow ? pool.low_docs : pool.high_docs;
    const std::vector<std::string> chosen = Sample(members, config.per_class, rng);
    const std::size_t n_train = FloorCount(config.train_frac, chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      (i < n_train ? split.train_ids : split.heldout_test_ids).push_back(chosen[i]);
      split.labels[chosen[i]] = label;
    }
  }
  const std::vector<std::string> moderate =
      Sample(pool.moderate_docs, FloorCount(config.moderate_frac, pool.moderate_docs.size()), rng);
  for (const std::string& id : moderate) {
    const Document* doc = corpus.Find(id);
    if (doc == nullptr || !doc->HasValidScore()) throw Error("moderate document " + id + " not scored");
    if (const auto label = MedianLabel(*doc->ic_score, median)) {
      split.moderate_test_ids.push_back(id);
      split.labels[id] = *label;
    }
  }
  return split;
}

LabeledDocuments Collect(const Corpus& corpus, std::span<const std::string> ids,
                         const std::map<std::string, Label>& labels) {
  LabeledDocuments out;
  out.docs.reserve(ids.size());
  out.labels.reserve(ids.size());
  for (const std::string& id : ids) {
    const Document* doc = corpus.Find(id);
    if (doc == nullptr) throw Error("document " + id + " not in corpus");
    const auto it = labels.find(id);
    if (it == labels.end()) throw Error("document " + id + " has no label");
    out.docs.push_back(doc);
    out.labels.push_back(it->second);
  }
  return out;
}

TrainedSelection TrainOnSelection(const Corpus& corpus, const CutoffSpec& spec,
                                  const SelectionConfig& selection, const ModelConfig& model,
                                  double median, std::uint64_t seed,
                                  const std::string& config_hash) {
  TrainedSelection out;
  out.pool = RankAndCut(corpus, spec);
  out.split = BuildSelectionSplit(corpus, out.pool, selection, median, seed);
  const LabeledDocuments train = Collect(corpus, out.split.train_ids, out.split.labels);
  const std::vector<std::string> test_ids = out.split.TestIds();
  const LabeledDocuments test = Collect(corpus, test_ids, out.split.labels);

  out.model.text = TextPipeline::Fit(train.docs, model.preprocess, model.encoding);
  Hyperparams params = model.params;
  params.seed = seed;
  out.model.classifier =
      Classifier::Fit(model.kind, EncodeDataset(out.model.text, train.docs, train.labels), params);
  out.report = Evaluate(out.model.classifier, EncodeDataset(out.model.text, test.docs, test.labels),
                        config_hash, seed);
  return out;
}

std::vector<CutoffRow> RunCutoffSweep(const Corpus& corpus, std::span<const CutoffSpec> specs,
                                      const SelectionConfig& selection, const ModelConfig& model,
                                      double median, std::uint64_t seed,
                                      const std::string& config_hash) {
  std::vector<CutoffRow> rows;
  for (const CutoffSpec& spec : specs) {
    CutoffRow row;
    row.spec = spec;
    try {
      TrainedSelection t = TrainOnSelection(corpus, spec, selection, model, median, seed, config_hash);
      row.n_low_pool = t.pool.low_docs.size();
      row.n_high_pool = t.pool.high_docs.size();
      row.n_moderate_pool = t.pool.moderate_docs.size();
      row.low_threshold = t.pool.low_threshold;
      row.high_threshold = t.pool.high_threshold;
      row.n_train = t.split.train_ids.size();
      row.n_test = t.split.heldout_test_ids.size() + t.split.moderate_test_ids.size();
      row.report = std::move(t.report);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GridReport RunEncoderGrid(const Corpus& corpus, const GridConfig& config, double median,
                          std::uint64_t seed, const std::string& config_hash) {
  GridReport grid;
  grid.spec = config.spec;
  const LabeledPool pool = RankAndCut(corpus, config.spec);
  const SelectionSplit split = BuildSelectionSplit(corpus, pool, config.selection, median, seed);
  const LabeledDocuments train = Collect(corpus, split.train_ids, split.labels);
  const std::vector<std::string> test_ids = split.TestIds();
  const LabeledDocuments test = Collect(corpus, test_ids, split.labels);
  grid.n_train = train.docs.size();
  grid.n_test = test.docs.size();

  const PreprocessResult train_tokens = PreprocessDocuments(train.docs, config.preprocess);
  std::vector<TokenizedDocument> test_tokens;
  test_tokens.reserve(test.docs.size());
  for (const Document* d : test.docs) {
    test_tokens.push_back(PreprocessDocument(*d, config.preprocess, train_tokens.stopwords));
  }

  for (EncodingScheme scheme : {EncodingScheme::kTfIdf, EncodingScheme::kIdfPresence}) {
    for (ClassifierKind kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest}) {
      for (NgramLevel level : {NgramLevel::kUnigram, NgramLevel::kBigram, NgramLevel::kTrigram}) {
        for (int prune : kGridPruneRules) {
          GridRow row;
          row.scheme = scheme;
          row.kind = kind;
          row.level = level;
          row.prune.min_total_occurrences = prune;
          try {
            const TextPipeline text =
                TextPipeline::Fit(train_tokens, config.preprocess, {scheme, level, row.prune});
            row.n_features = text.n_features();
            Hyperparams params = kind == ClassifierKind::kRandomForest ? config.forest : config.tree;
            params.seed = seed;
            const Classifier model = Classifier::Fit(
                kind, EncodeTokenized(text, train_tokens.documents, train.labels), params);
            row.report = Evaluate(model, EncodeTokenized(text, test_tokens, test.labels),
                                  config_hash, seed);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          grid.rows.push_back(std::move(row));
        }
      }
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const auto& r = grid.rows[i].report;
    if (r && (!best || r->accuracy > grid.rows[*best].report->accuracy)) best = i;
  }
  if (best) grid.rows[*best].best = true;
  return grid;
}

std::string ModerateRange::Name() const {
  return Percent(low_from) + "-" + Percent(low_to) + "|" + Percent(high_from) + "-" +
         Percent(high_to);
}

std::vector<ModerateRange> ModerateRanges() {
  std::vector<ModerateRange> ranges;
  for (int step = 1; step <= 7; ++step) {
    const double width = 0.05 * step;
    ranges.push_back({0.15, 0.15 + width, 0.85 - width, 0.85});
  }
  return ranges;
}

std::vector<ModerateRow> RunModerateSweep(const Corpus& corpus, const PipelineModel& model,
                                          std::span<const ModerateRange> ranges, double median,
                                          std::uint64_t seed, const std::string& config_hash) {
  const std::vector<ScoredIndex> ranked = RankValid(corpus);
  const std::vector<double> scores = ScoresOf(ranked);
  std::vector<std::optional<Label>> predicted(corpus.size());
  auto predict = [&](std::size_t i) {
    if (!predicted[i]) predicted[i] = model.Predict(corpus[i]);
    return *predicted[i];
  };

  std::vector<ModerateRow> rows;
  for (const ModerateRange& range : ranges) {
    ModerateRow row;
    row.range = range;
    try {
      if (scores.empty()) throw Error("no scored documents");
      const double low_from = NearestRank(scores, range.low_from);
      const double low_to = NearestRank(scores, range.low_to);
      const double high_from = NearestRank(scores, range.high_from);
      const double high_to = NearestRank(scores, range.high_to);
      ConfusionMatrix cm;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!corpus[i].HasValidScore()) continue;
        const double s = *corpus[i].ic_score;
        const bool in_low = s >= low_from && s < low_to;
        const bool in_high = s > high_from && s <= high_to;
        if (!in_low && !in_high) continue;
        const auto truth = MedianLabel(s, median);
        if (!truth) continue;
        (in_low ? row.n_low : row.n_high) += 1;
        cm.Add(*truth, predict(i));
      }
      if (cm.total() == 0) throw Error("range " + range.Name() + " selects no documents");
      row.report = Summarize(cm, config_hash, seed);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

MedianProportion ComputeMedianProportion(const Corpus& corpus, const PipelineModel& model,
                                         double median) {
  MedianProportion out;
  std::size_t high = 0;
  for (const Document& doc : corpus) {
    if (!doc.HasValidScore() || *doc.ic_score != median) continue;
    ++out.n_docs;
    high += model.Predict(doc) == Label::kHigh;
  }
  if (out.n_docs == 0) throw Error("no document scores exactly " + FormatDouble(median));
  out.frac_high = static_cast<double>(high) / static_cast<double>(out.n_docs);
  out.frac_low = static_cast<double>(out.n_docs - high) / static_cast<double>(out.n_docs);
  return out;
}

void WriteCutoffCsv(std::span<const CutoffRow> rows, const std::string& config_hash,
                    std::uint64_t seed, std::ostream& out) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].report) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].report->accuracy > rows[b].report->accuracy;
  });
  std::vector<std::size_t> rank(rows.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;

  out << "row,cutoff,low_pct,high_pct,low_threshold,high_threshold,n_low_pool,n_high_pool,"
         "n_moderate_pool,n_train,n_test,"
      << kMetricColumns << ",rank,error,config_hash,seed\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CutoffRow& r = rows[i];
    out << i + 1 << ',' << r.spec.Name() << ',' << FormatDouble(r.spec.low_pct) << ','
        << FormatDouble(r.spec.high_pct) << ',' << FormatDouble(r.low_threshold) << ','
        << FormatDouble(r.high_threshold) << ',' << r.n_low_pool << ',' << r.n_high_pool << ','
        << r.n_moderate_pool << ',' << r.n_train << ',' << r.n_test << ',';
    WriteMetrics(r.report, out);
    out << ',';
    if (rank[i] > 0) out << rank[i];
    out << ',' << CsvField(r.error) << ',' << config_hash << ',' << seed << '\n';
  }
}

void WriteGridCsv(const GridReport& grid, const std::string& config_hash, std::uint64_t seed,
                  std::ostream& out) {
  out << "row,cutoff,encoding,classifier,ngram,prune_min_total,n_features,n_train,n_test,"
      << kMetricColumns << ",best,error,config_hash,seed\n";
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const GridRow& r = grid.rows[i];
    out << i + 1 << ',' << grid.spec.Name() << ',' << ToString(r.scheme) << ','
        << ToString(r.kind) << ',' << ToString(r.level) << ',' << r.prune.min_total_occurrences
        << ',' << r.n_features << ',' << grid.n_train << ',' << grid.n_test << ',';
    WriteMetrics(r.report, out);
    out << ',' << (r.best ? 1 : 0) << ',' << CsvField(r.error) << ',' << config_hash << ','
        << seed << '\n';
  }
}

void WriteModerateCsv(std::span<const ModerateRow> rows, const std::string& config_hash,
                      std::uint64_t seed, std::ostream& out) {
  out << "row,low_range,high_range,n_low,n_high," << kMetricColumns
      << ",error,config_hash,seed\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ModerateRow& r = rows[i];
    out << i + 1 << ',' << Percent(r.range.low_from) << '-' << Percent(r.range.low_to) << ','
        << Percent(r.range.high_from) << '-' << Percent(r.range.high_to) << ',' << r.n_low << ','
        << r.n_high << ',';
    WriteMetrics(r.report, out);
    out << ',' << CsvField(r.error) << ',' << config_hash << ',' << seed << '\n';
  }
}

void WriteEvaluationCsv(const EvaluationReport& report, std::string_view label,
                        std::ostream& out) {
  out << "set," << kMetricColumns << ",config_hash,seed\n";
  out << CsvField(label) << ',';
  WriteMetrics(report, out);
  out << ',' << report.config_hash << ',' << report.seed << '\n';
}

void WriteTopFeaturesCsv(const TopFeatures& top, const std::string& config_hash,
                         std::uint64_t seed, std::ostream& out) {
  out << "rank,term,weight,config_hash,seed\n";
  for (std::size_t i = 0; i < top.features.size(); ++i) {
    out << i + 1 << ',' << CsvField(top.features[i].term) << ','
        << FormatDouble(top.features[i].weight) << ',' << config_hash << ',' << seed << '\n';
  }
}

}  // namespace grantmine
