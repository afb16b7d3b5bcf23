#include "grantmine/tree_models.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "grantmine/error.h"

namespace grantmine {
namespace {

__extension__ typedef __int128 Int128;

// One nonzero cell of a node's sample block.
struct Cell {
  FeatureIndex feature;
  double value;
  Label label;
};

void SortCells(std::vector<Cell>& cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
  });
}

std::int64_t SumSquares(const ClassCounts& c) { return c.low * c.low + c.high * c.high; }

// Exact split score sum_children (low^2 + high^2) / n_child, held as a fraction so
// equal-gain candidates compare equal and tie-breaking is deterministic.
struct Score {
  Int128 num = 0;
  Int128 den = 1;

  static Score Of(const ClassCounts& left, const ClassCounts& right) {
    const Int128 nl = left.total();
    const Int128 nr = right.total();
    return {static_cast<Int128>(SumSquares(left)) * nr + static_cast<Int128>(SumSquares(right)) * nl,
            nl * nr};
  }
  bool operator>(const Score& o) const { return num * o.den > o.num * den; }
};

// Scans one feature's sorted nonzero cells plus its implicit zero block.
class SplitScanner {
 public:
  SplitScanner(ClassCounts node, int min_samples_leaf)
      : node_(node), min_leaf_(min_samples_leaf) {}

  void ScanFeature(FeatureIndex feature, std::span<const Cell> cells) {
    ClassCounts nonzero;
    for (const Cell& c : cells) nonzero.Add(c.label);
    const ClassCounts zeros{node_.low - nonzero.low, node_.high - nonzero.high};

    feature_ = feature;
    have_prev_ = false;
    left_ = {};
    std::size_t i = 0;
    for (; i < cells.size() && cells[i].value < 0.0; ++i) Visit(cells[i].value, cells[i].label);
    if (zeros.total() > 0) VisitBlock(0.0, zeros);
    for (; i < cells.size(); ++i) Visit(cells[i].value, cells[i].label);
  }

  std::optional<SplitChoice> Result() const {
    if (!best_) return std::nullopt;
    const Int128 n = node_.total();
    // Positive gain: score / n_child-weighted exceeds the parent's (a^2 + b^2) / n.
    if (!(best_score_.num * n > static_cast<Int128>(SumSquares(node_)) * best_score_.den)) {
      return std::nullopt;
    }
    const long double nn = static_cast<long double>(node_.total());
    const long double score = static_cast<long double>(best_score_.num) /
                              static_cast<long double>(best_score_.den);
    SplitChoice choice = *best_;
    choice.gain = static_cast<double>((score - SumSquares(node_) / nn) / nn);
    return choice;
  }

 private:
  void Visit(double value, Label y) {
    ClassCounts one;
    one.Add(y);
    VisitBlock(value, one);
  }

  void VisitBlock(double value, const ClassCounts& block) {
    if (have_prev_ && value != prev_) Evaluate(prev_, value);
    left_.low += block.low;
    left_.high += block.high;
    prev_ = value;
    have_prev_ = true;
  }

  void Evaluate(double lo, double hi) {
    const std::int64_t nl = left_.total();
    const std::int64_t nr = node_.total() - nl;
    if (nl < min_leaf_ || nr < min_leaf_) return;
    const ClassCounts right{node_.low - left_.low, node_.high - left_.high};
    const Score score = Score::Of(left_, right);
    if (best_ && !(score > best_score_)) return;
    double mid = lo + (hi - lo) / 2.0;
    if (!(mid < hi)) mid = lo;
    best_ = SplitChoice{feature_, mid, 0.0};
    best_score_ = score;
  }

  ClassCounts node_;
  std::int64_t min_leaf_;
  FeatureIndex feature_ = 0;
  bool have_prev_ = false;
  double prev_ = 0.0;
  ClassCounts left_;
  std::optional<SplitChoice> best_;
  Score best_score_;
};

ClassCounts CountLabels(const Dataset& data, std::span<const std::uint32_t> samples) {
  ClassCounts c;
  for (std::uint32_t s : samples) c.Add(data.labels[s]);
  return c;
}

// `splittable`, when given, masks out features known never to split.
void GatherCells(const Dataset& data, std::span<const std::uint32_t> samples,
                 std::vector<Cell>& cells, const std::vector<bool>* splittable = nullptr) {
  cells.clear();
  for (std::uint32_t s : samples) {
    const Label y = data.labels[s];
    for (const SparseEntry& e : data.rows[s].entries()) {
      if (splittable == nullptr || (*splittable)[e.index]) cells.push_back({e.index, e.value, y});
    }
  }
  SortCells(cells);
}

// A feature with only positive values, present in fewer than min_samples_leaf
// of the root samples, leaves fewer than that many on the right of any
// threshold, in every node below the root too.
std::vector<bool> SplittableFeatures(const Dataset& data, std::span<const std::uint32_t> samples,
                                     int min_samples_leaf) {
  std::vector<std::int64_t> positive(data.n_features, 0);
  std::vector<bool> negative(data.n_features, false);
  for (std::uint32_t s : samples) {
    for (const SparseEntry& e : data.rows[s].entries()) {
      if (e.value > 0.0) {
        ++positive[e.index];
      } else {
        negative[e.index] = true;
      }
    }
  }
  std::vector<bool> mask(data.n_features);
  for (std::size_t f = 0; f < mask.size(); ++f) {
    mask[f] = negative[f] || positive[f] >= min_samples_leaf;
  }
  return mask;
}

// Calls fn(feature, cells) for each feature group of sorted cells.
template <typename Fn>
void ForEachFeature(std::span<const Cell> cells, Fn&& fn) {
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].feature == cells[i].feature) ++j;
    fn(cells[i].feature, cells.subspan(i, j - i));
    i = j;
  }
}

class TreeGrower {
 public:
  TreeGrower(const Dataset& data, const Hyperparams& params, Rng& rng)
      : data_(data),
        params_(params),
        rng_(rng),
        n_candidates_(params.CandidateCount(data.n_features)) {}

  std::vector<TreeNode> Grow(std::vector<std::uint32_t> samples) {
    nodes_.clear();
    splittable_ = SplittableFeatures(data_, samples, params_.min_samples_leaf);
    GrowNode(std::move(samples), 0);
    return std::move(nodes_);
  }

 private:
  std::int32_t GrowNode(std::vector<std::uint32_t> samples, int depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    TreeNode node;
    node.counts = CountLabels(data_, samples);
    node.impurity = Gini(node.counts);
    node.label = node.counts.Majority();

    const auto n = static_cast<std::int64_t>(samples.size());
    std::optional<SplitChoice> split;
    if (depth < params_.max_depth && n >= params_.min_samples_split && node.impurity > 0.0) {
      split = SearchNode(samples, node.counts);
    }
    if (!split) {
      nodes_[id] = node;
      return id;
    }

    std::vector<std::uint32_t> left_samples;
    std::vector<std::uint32_t> right_samples;
    for (std::uint32_t s : samples) {
      (data_.rows[s].Get(split->feature) <= split->threshold ? left_samples : right_samples)
          .push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.gain = split->gain;
    node.left = GrowNode(std::move(left_samples), depth + 1);
    node.right = GrowNode(std::move(right_samples), depth + 1);
    nodes_[id] = node;
    return id;
  }

  // Only features that could split here need a sampling decision: absent
  // features are constant at the node and masked ones fail min_samples_leaf.
  // Visiting those first in a selection-sampling pass (include with
  // probability still_needed / still_unseen) yields exactly their share of a
  // uniform n_candidates-subset of all features.
  std::optional<SplitChoice> SearchNode(std::span<const std::uint32_t> samples,
                                        ClassCounts counts) {
    GatherCells(data_, samples, cells_, &splittable_);
    SplitScanner scanner(counts, params_.min_samples_leaf);
    const bool sample_features = n_candidates_ < data_.n_features;
    std::size_t needed = n_candidates_;
    std::size_t unseen = data_.n_features;
    ForEachFeature(cells_, [&](FeatureIndex f, std::span<const Cell> group) {
      if (sample_features) {
        const bool take = needed > 0 && UniformUnit(rng_) * static_cast<double>(unseen) <
                                            static_cast<double>(needed);
        --unseen;
        if (!take) return;
        --needed;
      }
      scanner.ScanFeature(f, group);
    });
    return scanner.Result();
  }

  const Dataset& data_;
  const Hyperparams& params_;
  Rng& rng_;
  std::size_t n_candidates_;
  std::vector<TreeNode> nodes_;
  std::vector<Cell> cells_;
  std::vector<bool> splittable_;
};

std::vector<double> NormalizeImportances(std::vector<double> raw) {
  double total = 0.0;
  for (double v : raw) total += v;
  if (total > 0.0) {
    for (double& v : raw) v /= total;
  } else {
    std::fill(raw.begin(), raw.end(), 0.0);
  }
  return raw;
}

void CheckDimension(const SparseVector& v, std::size_t n_features) {
  if (v.dim() != n_features) {
    throw Error("feature dimension mismatch: vector has " + std::to_string(v.dim()) +
                ", model expects " + std::to_string(n_features));
  }
}

}  // namespace

std::string_view ToString(Label label) { return label == Label::kHigh ? "high" : "low"; }

double Gini(ClassCounts counts) {
  if (counts.low < 0 || counts.high < 0) throw Error("negative class count");
  const std::int64_t n = counts.total();
  if (n == 0) throw Error("Gini impurity of an empty node");
  const double pl = static_cast<double>(counts.low) / static_cast<double>(n);
  const double ph = static_cast<double>(counts.high) / static_cast<double>(n);
  return 1.0 - (pl * pl + ph * ph);
}

void Hyperparams::Validate() const {
  if (max_depth < 1) throw Error("max_depth must be >= 1");
  if (min_samples_split < 2) throw Error("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw Error("min_samples_leaf must be >= 1");
  if (!(max_features > 0.0 && max_features <= 1.0)) throw Error("max_features must lie in (0, 1]");
  if (n_estimators < 1) throw Error("n_estimators must be >= 1");
}

std::size_t Hyperparams::CandidateCount(std::size_t n_features) const {
  if (n_features == 0) return 0;
  const double raw = std::ceil(max_features * static_cast<double>(n_features) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, n_features);
}

Hyperparams ProposedForestParams(std::uint64_t seed) {
  Hyperparams p;
  p.max_depth = 22;
  p.max_features = 0.9931;
  p.min_samples_leaf = 11;
  p.min_samples_split = 67;
  p.n_estimators = 102;
  p.seed = seed;
  return p;
}

Hyperparams DefaultTreeParams(std::uint64_t seed) {
  Hyperparams p;
  p.max_depth = 10;
  p.min_samples_split = 10;
  p.min_samples_leaf = 5;
  p.max_features = 0.999;
  p.n_estimators = 1;
  p.seed = seed;
  return p;
}

std::string_view ToString(ClassifierKind kind) {
  return kind == ClassifierKind::kRandomForest ? "rf" : "dt";
}

ClassifierKind ParseClassifierKind(std::string_view name) {
  if (name == "rf" || name == "forest" || name == "random-forest") {
    return ClassifierKind::kRandomForest;
  }
  if (name == "dt" || name == "tree" || name == "decision-tree") {
    return ClassifierKind::kDecisionTree;
  }
  throw Error("unknown classifier \"" + std::string(name) + "\"");
}

void Dataset::Validate() const {
  if (rows.size() != labels.size()) throw Error("dataset rows and labels differ in length");
  for (const SparseVector& r : rows) CheckDimension(r, n_features);
}

std::optional<SplitChoice> FindBestSplit(const Dataset& data,
                                         std::span<const std::uint32_t> samples,
                                         std::span<const FeatureIndex> candidate_features,
                                         int min_samples_leaf) {
  if (samples.size() < 2 || candidate_features.empty()) return std::nullopt;
  std::vector<FeatureIndex> allowed(candidate_features.begin(), candidate_features.end());
  std::sort(allowed.begin(), allowed.end());
  std::vector<Cell> cells;
  GatherCells(data, samples, cells);
  SplitScanner scanner(CountLabels(data, samples), min_samples_leaf);
  ForEachFeature(cells, [&](FeatureIndex f, std::span<const Cell> group) {
    if (std::binary_search(allowed.begin(), allowed.end(), f)) scanner.ScanFeature(f, group);
  });
  return scanner.Result();
}

double ImportanceVector::Sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

DecisionTreeModel::DecisionTreeModel(std::vector<TreeNode> nodes, Hyperparams params,
                                     std::size_t n_features)
    : nodes_(std::move(nodes)), params_(params), n_features_(n_features) {
  if (nodes_.empty()) throw Error("a tree needs at least one node");
  const auto count = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < count; ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) {
      if (node.right >= 0) throw Error("leaf node " + std::to_string(i) + " has a right child");
      continue;
    }
    if (node.left <= i || node.right <= i || node.left >= count || node.right >= count) {
      throw Error("node " + std::to_string(i) + " has invalid child links");
    }
    if (node.feature >= n_features_) {
      throw Error("node " + std::to_string(i) + " splits on an out-of-range feature");
    }
  }
}

Label DecisionTreeModel::Predict(const SparseVector& vector) const {
  CheckDimension(vector, n_features_);
  std::int32_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& node = nodes_[i];
    i = vector.Get(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes_[i].label;
}

int DecisionTreeModel::Depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return deepest;
}

std::vector<double> DecisionTreeModel::RawImportances() const {
  std::vector<double> raw(n_features_, 0.0);
  const auto root_n = static_cast<double>(nodes_.front().n_samples());
  for (const TreeNode& node : nodes_) {
    if (node.is_leaf()) continue;
    raw[node.feature] += static_cast<double>(node.n_samples()) / root_n * node.gain;
  }
  return raw;
}

RandomForestModel::RandomForestModel(std::vector<DecisionTreeModel> trees, Hyperparams params,
                                     std::size_t n_features)
    : trees_(std::move(trees)), params_(params), n_features_(n_features) {
  if (trees_.empty()) throw Error("a forest needs at least one tree");
  for (const DecisionTreeModel& t : trees_) {
    if (t.n_features() != n_features_) throw Error("forest trees disagree on feature count");
  }
}

Label RandomForestModel::Predict(const SparseVector& vector) const {
  CheckDimension(vector, n_features_);
  std::size_t high = 0;
  for (const DecisionTreeModel& t : trees_) high += t.Predict(vector) == Label::kHigh;
  return 2 * high > trees_.size() ? Label::kHigh : Label::kLow;
}

DecisionTreeModel FitTree(const Dataset& data, const Hyperparams& params, Rng& feature_sampler) {
  params.Validate();
  data.Validate();
  if (data.size() == 0) throw Error("cannot fit a tree on an empty training set");
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) throw Error("training set too large");
  std::vector<std::uint32_t> samples(data.size());
  for (std::uint32_t i = 0; i < samples.size(); ++i) samples[i] = i;
  TreeGrower grower(data, params, feature_sampler);
  return DecisionTreeModel(grower.Grow(std::move(samples)), params, data.n_features);
}

DecisionTreeModel FitTree(const Dataset& data, const Hyperparams& params) {
  Rng rng = MakeRng(params.seed, 0);
  return FitTree(data, params, rng);
}

RandomForestModel FitForest(const Dataset& data, const Hyperparams& params,
                            unsigned num_threads) {
  params.Validate();
  data.Validate();
  if (data.size() == 0) throw Error("cannot fit a forest on an empty training set");
  const auto n_trees = static_cast<std::size_t>(params.n_estimators);
  std::vector<std::optional<DecisionTreeModel>> trees(n_trees);

  auto fit_one = [&](std::size_t i) {
    Rng rng = MakeRng(params.seed, i);
    std::vector<std::uint32_t> samples(data.size());
    for (std::uint32_t j = 0; j < samples.size(); ++j) {
      samples[j] = params.bootstrap ? static_cast<std::uint32_t>(UniformIndex(rng, data.size())) : j;
    }
    TreeGrower grower(data, params, rng);
    trees[i].emplace(grower.Grow(std::move(samples)), params, data.n_features);
  };

  if (num_threads == 0) num_threads = std::max(1u, std::thread::hardware_concurrency());
  num_threads = static_cast<unsigned>(std::min<std::size_t>(num_threads, n_trees));
  if (num_threads <= 1) {
    for (std::size_t i = 0; i < n_trees; ++i) fit_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < num_threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n_trees;) {
          try {
            fit_one(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<DecisionTreeModel> fitted;
  fitted.reserve(n_trees);
  for (auto& t : trees) fitted.push_back(std::move(*t));
  return RandomForestModel(std::move(fitted), params, data.n_features);
}

ImportanceVector ComputeImportances(const DecisionTreeModel& model) {
  return {NormalizeImportances(model.RawImportances())};
}

ImportanceVector ComputeImportances(const RandomForestModel& model) {
  std::vector<double> mean(model.n_features(), 0.0);
  for (const DecisionTreeModel& t : model.trees()) {
    const std::vector<double> raw = t.RawImportances();
    for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += raw[f];
  }
  const auto n = static_cast<double>(model.trees().size());
  for (double& v : mean) v /= n;
  return {NormalizeImportances(std::move(mean))};
}

TopFeatures TopKFeatures(const ImportanceVector& importances, const Vocabulary& vocab,
                         std::size_t k) {
  if (k == 0) throw Error("top-k needs k >= 1");
  if (importances.values.size() != vocab.size()) {
    throw Error("importance vector and vocabulary sizes differ");
  }
  std::vector<std::size_t> order;
  for (std::size_t f = 0; f < importances.values.size(); ++f) {
    if (importances.values[f] > 0.0) order.push_back(f);
  }
  TopFeatures top;
  top.nonzero_count = order.size();
  // Vocabulary indices are in term order, so index order breaks weight ties by term.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importances.values[a] > importances.values[b];
  });
  order.resize(std::min(order.size(), k));
  for (std::size_t f : order) top.features.push_back({vocab.term(f), importances.values[f]});
  return top;
}

Classifier Classifier::Fit(ClassifierKind kind, const Dataset& data, const Hyperparams& params) {
  if (kind == ClassifierKind::kRandomForest) return Classifier(FitForest(data, params));
  return Classifier(FitTree(data, params));
}

ClassifierKind Classifier::kind() const {
  return forest() ? ClassifierKind::kRandomForest : ClassifierKind::kDecisionTree;
}

Label Classifier::Predict(const SparseVector& vector) const {
  return std::visit([&](const auto& m) { return m.Predict(vector); }, model_);
}

ImportanceVector Classifier::Importances() const {
  return std::visit([](const auto& m) { return ComputeImportances(m); }, model_);
}

const Hyperparams& Classifier::params() const {
  return std::visit([](const auto& m) -> const Hyperparams& { return m.params(); }, model_);
}

std::size_t Classifier::n_features() const {
  return std::visit([](const auto& m) { return m.n_features(); }, model_);
}

}  // namespace grantmine
