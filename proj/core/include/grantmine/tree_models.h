#ifndef GRANTMINE_TREE_MODELS_H_
#define GRANTMINE_TREE_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grantmine/feature_encoding.h"
#include "grantmine/random.h"
#include "grantmine/sparse_vector.h"

namespace grantmine {

enum class Label : std::uint8_t { kLow = 0, kHigh = 1 };

std::string_view ToString(Label label);

struct ClassCounts {
  std::int64_t low = 0;
  std::int64_t high = 0;

  std::int64_t total() const { return low + high; }
  void Add(Label y) { (y == Label::kHigh ? high : low) += 1; }
  // Ties go to Low.
  Label Majority() const { return high > low ? Label::kHigh : Label::kLow; }

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

// 1 - sum of squared class proportions. Throws Error when both counts are 0.
double Gini(ClassCounts counts);

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct Hyperparams {
  int max_depth = kUnlimitedDepth;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  // Fraction of features offered to each node's split search.
  double max_features = 1.0;
  int n_estimators = 100;  // forests only
  std::uint64_t seed = 0;
  bool bootstrap = true;  // forests only; off reproduces plain trees

  void Validate() const;
  // ceil(max_features * n_features), at least 1 and at most n_features.
  std::size_t CandidateCount(std::size_t n_features) const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// The tuned forest reported for the final grant model: depth 22,
// 99.31% of features, leaf 11, split 67, 102 trees.
Hyperparams ProposedForestParams(std::uint64_t seed = 0);
// Decision tree inside the tuning box: depth 10, split 10, leaf 5, 99.9% of features.
Hyperparams DefaultTreeParams(std::uint64_t seed = 0);

enum class ClassifierKind { kDecisionTree, kRandomForest };
std::string_view ToString(ClassifierKind kind);
ClassifierKind ParseClassifierKind(std::string_view name);

// Encoded training or evaluation rows with binary labels.
struct Dataset {
  std::vector<SparseVector> rows;
  std::vector<Label> labels;
  std::size_t n_features = 0;

  std::size_t size() const { return rows.size(); }
  // Throws Error on length or dimension mismatches.
  void Validate() const;
};

struct SplitChoice {
  FeatureIndex feature = 0;
  double threshold = 0.0;
  double gain = 0.0;  // parent impurity minus weighted child impurity
};

// Best Gini split of `samples` (indices into `data`, repeats allowed) over
// `candidate_features`. Thresholds are midpoints between consecutive distinct
// values; absent sparse entries count as 0.0. Ties go to the lowest feature,
// then the lowest threshold. Splits leaving fewer than `min_samples_leaf`
// samples on a side are skipped. Returns nullopt when no split has positive gain.
std::optional<SplitChoice> FindBestSplit(const Dataset& data,
                                         std::span<const std::uint32_t> samples,
                                         std::span<const FeatureIndex> candidate_features,
                                         int min_samples_leaf = 1);

struct TreeNode {
  // Children indices; -1 on leaves.
  std::int32_t left = -1;
  std::int32_t right = -1;
  FeatureIndex feature = 0;
  double threshold = 0.0;  // value <= threshold goes left
  double gain = 0.0;
  double impurity = 0.0;
  ClassCounts counts;
  Label label = Label::kLow;  // majority class at this node

  bool is_leaf() const { return left < 0; }
  std::int64_t n_samples() const { return counts.total(); }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Per-feature weights summing to 1, or all zero when the model never splits.
struct ImportanceVector {
  std::vector<double> values;

  double Sum() const;
  friend bool operator==(const ImportanceVector&, const ImportanceVector&) = default;
};

class DecisionTreeModel {
 public:
  DecisionTreeModel() = default;
  // nodes[0] is the root. Throws Error on malformed node links.
  DecisionTreeModel(std::vector<TreeNode> nodes, Hyperparams params, std::size_t n_features);

  // Throws Error when vector.dim() != n_features().
  Label Predict(const SparseVector& vector) const;

  std::span<const TreeNode> nodes() const { return nodes_; }
  const Hyperparams& params() const { return params_; }
  std::size_t n_features() const { return n_features_; }
  // Edges on the longest root-to-leaf path.
  int Depth() const;
  // Sum over internal nodes splitting on f of (n_node / n_root) * gain.
  std::vector<double> RawImportances() const;

  friend bool operator==(const DecisionTreeModel&, const DecisionTreeModel&) = default;

 private:
  std::vector<TreeNode> nodes_;
  Hyperparams params_;
  std::size_t n_features_ = 0;
};

class RandomForestModel {
 public:
  RandomForestModel() = default;
  RandomForestModel(std::vector<DecisionTreeModel> trees, Hyperparams params,
                    std::size_t n_features);

  // Majority vote; an exact tie predicts Low.
  Label Predict(const SparseVector& vector) const;

  std::span<const DecisionTreeModel> trees() const { return trees_; }
  const Hyperparams& params() const { return params_; }
  std::size_t n_features() const { return n_features_; }

  friend bool operator==(const RandomForestModel&, const RandomForestModel&) = default;

 private:
  std::vector<DecisionTreeModel> trees_;
  Hyperparams params_;
  std::size_t n_features_ = 0;
};

// Recursive CART. Each node offers CandidateCount(n_features) features drawn
// without replacement from `feature_sampler`. Throws Error on empty input.
DecisionTreeModel FitTree(const Dataset& data, const Hyperparams& params, Rng& feature_sampler);
// Samples features from stream 0 of params.seed.
DecisionTreeModel FitTree(const Dataset& data, const Hyperparams& params);

// Tree i draws its bootstrap sample and node feature subsets from stream i of
// params.seed, so the result does not depend on `num_threads` (0 = hardware).
RandomForestModel FitForest(const Dataset& data, const Hyperparams& params,
                            unsigned num_threads = 0);

ImportanceVector ComputeImportances(const DecisionTreeModel& model);
// Mean of the per-tree raw importances, normalized.
ImportanceVector ComputeImportances(const RandomForestModel& model);

struct RankedFeature {
  std::string term;
  double weight = 0.0;
};

struct TopFeatures {
  std::vector<RankedFeature> features;  // descending weight, ties by term
  std::size_t nonzero_count = 0;        // features with weight > 0 overall
};

// Only features with positive weight are returned. Throws Error when k == 0 or
// the vocabulary size does not match.
TopFeatures TopKFeatures(const ImportanceVector& importances, const Vocabulary& vocab,
                         std::size_t k);

// Either model behind one interface.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(DecisionTreeModel tree) : model_(std::move(tree)) {}
  explicit Classifier(RandomForestModel forest) : model_(std::move(forest)) {}

  static Classifier Fit(ClassifierKind kind, const Dataset& data, const Hyperparams& params);

  ClassifierKind kind() const;
  Label Predict(const SparseVector& vector) const;
  ImportanceVector Importances() const;
  const Hyperparams& params() const;
  std::size_t n_features() const;

  const DecisionTreeModel* tree() const { return std::get_if<DecisionTreeModel>(&model_); }
  const RandomForestModel* forest() const { return std::get_if<RandomForestModel>(&model_); }

  friend bool operator==(const Classifier&, const Classifier&) = default;

 private:
  std::variant<DecisionTreeModel, RandomForestModel> model_;
};

}  // namespace grantmine

#endif  // GRANTMINE_TREE_MODELS_H_
