#ifndef GRANTMINE_EXPERIMENT_H_
#define GRANTMINE_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grantmine/corpus.h"
#include "grantmine/metrics.h"
#include "grantmine/pipeline.h"

namespace grantmine {

// Percentile pair splitting a ranked corpus into low, moderate and high pools.
struct CutoffSpec {
  double low_pct = 0.15;
  double high_pct = 0.85;

  void Validate() const;
  std::string Name() const;  // "15-85"

  friend bool operator==(const CutoffSpec&, const CutoffSpec&) = default;
};

// 15/85, 20/80, 25/75, 30/70, 35/65, 40/60.
std::vector<CutoffSpec> SelectionCutoffs();

struct LabeledPool {
  std::vector<std::string> low_docs;
  std::vector<std::string> high_docs;
  std::vector<std::string> moderate_docs;
  double low_threshold = 0.0;
  double high_threshold = 0.0;
};

// Ranks the valid-score documents ascending. Thresholds are the nearest-rank
// scores at low_pct and high_pct; low is strictly below, high strictly above,
// and everything else, boundaries included, is moderate. Ids within a pool
// are in score order, ties in corpus order. Throws Error for fewer than 10
// valid documents or an empty extreme pool.
LabeledPool RankAndCut(const Corpus& corpus, const CutoffSpec& spec);

struct SelectionConfig {
  std::size_t per_class = 400;
  double train_frac = 0.85;
  // Share of the moderate pool added to the test set.
  double moderate_frac = 0.15;

  void Validate() const;
};

struct SelectionSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> heldout_test_ids;
  std::vector<std::string> moderate_test_ids;
  std::map<std::string, Label> labels;
  std::uint64_t seed = 0;

  // Held-out ids followed by moderate ids.
  std::vector<std::string> TestIds() const;
};

// Draws per_class documents from each extreme pool (all of them when the pool
// is smaller), splits each class train_frac / rest, then samples
// floor(moderate_frac * |moderate pool|) moderate documents, labelling them
// by the median rule and dropping those exactly on it.
SelectionSplit BuildSelectionSplit(const Corpus& corpus, const LabeledPool& pool,
                                   const SelectionConfig& config, double median,
                                   std::uint64_t seed);

struct LabeledDocuments {
  std::vector<const Document*> docs;
  std::vector<Label> labels;
};

// Throws Error for ids missing from the corpus or the label map.
LabeledDocuments Collect(const Corpus& corpus, std::span<const std::string> ids,
                         const std::map<std::string, Label>& labels);

// Median rule: above is High, below is Low, equal has no label.
std::optional<Label> MedianLabel(double score, double median);

struct ModelConfig {
  PreprocessConfig preprocess;
  EncodingConfig encoding;
  ClassifierKind kind = ClassifierKind::kRandomForest;
  Hyperparams params = ProposedForestParams();
};

struct TrainedSelection {
  LabeledPool pool;
  SelectionSplit split;
  PipelineModel model;
  EvaluationReport report;
};

// rank -> split -> fit text pipeline and classifier on train -> evaluate on
// the final test set. params.seed is replaced by `seed`.
TrainedSelection TrainOnSelection(const Corpus& corpus, const CutoffSpec& spec,
                                  const SelectionConfig& selection, const ModelConfig& model,
                                  double median, std::uint64_t seed,
                                  const std::string& config_hash);

struct CutoffRow {
  CutoffSpec spec;
  std::size_t n_low_pool = 0;
  std::size_t n_high_pool = 0;
  std::size_t n_moderate_pool = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double low_threshold = 0.0;
  double high_threshold = 0.0;
  std::optional<EvaluationReport> report;
  std::string error;  // set instead of report when the row failed
};

// One row per spec, in input order; failures are recorded, not thrown.
std::vector<CutoffRow> RunCutoffSweep(const Corpus& corpus, std::span<const CutoffSpec> specs,
                                      const SelectionConfig& selection, const ModelConfig& model,
                                      double median, std::uint64_t seed,
                                      const std::string& config_hash);

struct GridConfig {
  CutoffSpec spec;
  SelectionConfig selection;
  PreprocessConfig preprocess;
  Hyperparams forest = ProposedForestParams();
  Hyperparams tree = DefaultTreeParams();
};

struct GridRow {
  EncodingScheme scheme = EncodingScheme::kTfIdf;
  ClassifierKind kind = ClassifierKind::kRandomForest;
  NgramLevel level = NgramLevel::kUnigram;
  PruneRule prune;
  std::size_t n_features = 0;
  std::optional<EvaluationReport> report;
  std::string error;
  bool best = false;
};

struct GridReport {
  CutoffSpec spec;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<GridRow> rows;
};

inline constexpr int kGridPruneRules[] = {0, 1, 2};

// 2 encodings x 2 classifiers x 3 n-gram levels x 3 prune rules on one shared
// split, in that nesting order. The most accurate row (earliest on ties) is
// flagged best.
GridReport RunEncoderGrid(const Corpus& corpus, const GridConfig& config, double median,
                          std::uint64_t seed, const std::string& config_hash);

// New low range [low_from, low_to) and high range (high_from, high_to] in
// percentile terms, resolved to nearest-rank scores.
struct ModerateRange {
  double low_from = 0.15;
  double low_to = 0.20;
  double high_from = 0.80;
  double high_to = 0.85;

  std::string Name() const;  // "15-20|80-85"
};

// 15-20|80-85 widening by 5 points per row to 15-50|50-85.
std::vector<ModerateRange> ModerateRanges();

struct ModerateRow {
  ModerateRange range;
  std::size_t n_low = 0;
  std::size_t n_high = 0;
  std::optional<EvaluationReport> report;
  std::string error;
};

// Scores every valid document whose score falls in a row's ranges with
// `model`, labelled by the median rule (median documents skipped).
std::vector<ModerateRow> RunModerateSweep(const Corpus& corpus, const PipelineModel& model,
                                          std::span<const ModerateRange> ranges, double median,
                                          std::uint64_t seed, const std::string& config_hash);

struct MedianProportion {
  std::size_t n_docs = 0;
  double frac_high = 0.0;
  double frac_low = 0.0;
};

// Predictions over documents scoring exactly `median`. Throws Error when there
// are none.
MedianProportion ComputeMedianProportion(const Corpus& corpus, const PipelineModel& model,
                                         double median);

// CSV reports: header row, LF endings, config_hash and seed on every row.
void WriteCutoffCsv(std::span<const CutoffRow> rows, const std::string& config_hash,
                    std::uint64_t seed, std::ostream& out);
void WriteGridCsv(const GridReport& grid, const std::string& config_hash, std::uint64_t seed,
                  std::ostream& out);
void WriteModerateCsv(std::span<const ModerateRow> rows, const std::string& config_hash,
                      std::uint64_t seed, std::ostream& out);
void WriteEvaluationCsv(const EvaluationReport& report, std::string_view label, std::ostream& out);
void WriteTopFeaturesCsv(const TopFeatures& top, const std::string& config_hash,
                         std::uint64_t seed, std::ostream& out);

}  // namespace grantmine

#endif  // GRANTMINE_EXPERIMENT_H_
