#include "grantmine/tree_models.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "grantmine/error.h"
#include "split_oracle.h"

namespace grantmine {
namespace {

using testing::BruteForceBestGain;
using testing::SmallData;
using testing::ToDataset;

constexpr Label L = Label::kLow;
constexpr Label H = Label::kHigh;

std::vector<std::uint32_t> AllSamples(const Dataset& d) {
  std::vector<std::uint32_t> s(d.size());
  std::iota(s.begin(), s.end(), 0u);
  return s;
}

std::vector<FeatureIndex> AllFeatures(std::size_t n) {
  std::vector<FeatureIndex> f(n);
  std::iota(f.begin(), f.end(), 0u);
  return f;
}

Hyperparams FullTree() {
  Hyperparams p;
  p.max_features = 1.0;
  p.bootstrap = false;
  return p;
}

double TrainingAccuracy(const Classifier& c, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += c.Predict(d.rows[i]) == d.labels[i];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

// Random sparse data where the label depends on a couple of features.
Dataset RandomSparse(std::uint64_t seed, std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(seed);
  Dataset d;
  d.n_features = dim;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<SparseEntry> e;
    for (std::size_t f = 0; f < dim; ++f) {
      if (rng() % 4 == 0) e.push_back({static_cast<FeatureIndex>(f), 0.5 + (rng() % 5)});
    }
    const SparseVector v = SparseVector::FromEntries(dim, e);
    const bool high = v.Get(0) + v.Get(1) > 1.0 || rng() % 10 == 0;
    d.rows.push_back(v);
    d.labels.push_back(high ? H : L);
  }
  return d;
}

void CheckTreeInvariants(const DecisionTreeModel& tree, const Hyperparams& p) {
  const auto nodes = tree.nodes();
  std::vector<int> depth(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& node = nodes[i];
    EXPECT_LE(depth[i], p.max_depth);
    EXPECT_GE(node.n_samples(), p.min_samples_leaf);
    EXPECT_EQ(node.label, node.counts.Majority());
    if (node.is_leaf()) continue;
    EXPECT_GE(node.n_samples(), p.min_samples_split);
    EXPECT_GT(node.gain, 0.0);
    const TreeNode& l = nodes[node.left];
    const TreeNode& r = nodes[node.right];
    EXPECT_EQ(l.counts.low + r.counts.low, node.counts.low);
    EXPECT_EQ(l.counts.high + r.counts.high, node.counts.high);
    depth[node.left] = depth[node.right] = depth[i] + 1;
  }
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(Gini({5, 5}), 0.5);
  EXPECT_DOUBLE_EQ(Gini({10, 0}), 0.0);
  EXPECT_DOUBLE_EQ(Gini({3, 1}), 0.375);
  EXPECT_THROW(Gini({0, 0}), Error);
}

TEST(FindBestSplit, PerfectSeparator) {
  const Dataset d = ToDataset({{{0}, {0}, {1}, {1}}, {L, L, H, H}}, 1);
  const auto s = FindBestSplit(d, AllSamples(d), AllFeatures(1));
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->feature, 0u);
  EXPECT_DOUBLE_EQ(s->threshold, 0.5);
  EXPECT_DOUBLE_EQ(s->gain, 0.5);
}

TEST(FindBestSplit, PureInputHasNoSplit) {
  const Dataset d = ToDataset({{{0}, {1}, {2}}, {H, H, H}}, 1);
  EXPECT_FALSE(FindBestSplit(d, AllSamples(d), AllFeatures(1)).has_value());
}

TEST(FindBestSplit, TiesGoToLowestFeature) {
  // Features 0 and 1 are identical perfect separators; feature 2 is noise.
  const Dataset d = ToDataset({{{0, 0, 1}, {0, 0, 0}, {1, 1, 1}, {1, 1, 0}}, {L, L, H, H}}, 3);
  const std::vector<FeatureIndex> rev{2, 1, 0};
  const auto s = FindBestSplit(d, AllSamples(d), rev);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->feature, 0u);
  EXPECT_DOUBLE_EQ(BruteForceBestGain({{{0, 0, 1}, {0, 0, 0}, {1, 1, 1}, {1, 1, 0}}, {L, L, H, H}}, 3),
                   s->gain);
}

TEST(FindBestSplit, NegativeAndAbsentValues) {
  // Sparse zeros sit between negative and positive values.
  Dataset d;
  d.n_features = 1;
  d.rows = {SparseVector::FromEntries(1, {{0, -2.0}}), SparseVector(1),
            SparseVector::FromEntries(1, {{0, 3.0}}), SparseVector::FromEntries(1, {{0, 4.0}})};
  d.labels = {L, L, H, H};
  const auto s = FindBestSplit(d, AllSamples(d), AllFeatures(1));
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(s->threshold, 1.5);
}

TEST(FindBestSplit, MinLeafSkipsSmallSides) {
  const Dataset d = ToDataset({{{0}, {1}, {1}, {1}}, {L, H, H, H}}, 1);
  EXPECT_TRUE(FindBestSplit(d, AllSamples(d), AllFeatures(1), 1).has_value());
  EXPECT_FALSE(FindBestSplit(d, AllSamples(d), AllFeatures(1), 2).has_value());
}

TEST(FindBestSplit, RepeatedSamplesCountTwice) {
  const Dataset d = ToDataset({{{0}, {1}}, {L, H}}, 1);
  const std::vector<std::uint32_t> samples{0, 0, 1};
  const auto s = FindBestSplit(d, samples, AllFeatures(1));
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(s->gain, 1.0 - (4.0 / 9 + 1.0 / 9), 1e-12);
}

TEST(FindBestSplit, MatchesBruteForceOnSmallBinaryData) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t f = 1; f <= 2; ++f) {
      testing::ForEachBinaryDataset(n, f, [&](const SmallData& sd) {
        const Dataset d = ToDataset(sd, f);
        const auto s = FindBestSplit(d, AllSamples(d), AllFeatures(f));
        const double want = BruteForceBestGain(sd, f);
        const double got = s ? s->gain : 0.0;
        ASSERT_NEAR(got, want, 1e-12);
      });
    }
  }
}

TEST(FindBestSplit, MatchesBruteForceOnRandomRealData) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    const std::size_t f = 1 + rng() % 4;
    const int min_leaf = 1 + static_cast<int>(rng() % 3);
    SmallData sd;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(f);
      for (double& v : row) v = static_cast<double>(static_cast<int>(rng() % 7) - 2) * 0.5;
      sd.values.push_back(row);
      sd.labels.push_back(rng() % 2 ? H : L);
    }
    const Dataset d = ToDataset(sd, f);
    const auto s = FindBestSplit(d, AllSamples(d), AllFeatures(f), min_leaf);
    EXPECT_NEAR(s ? s->gain : 0.0, BruteForceBestGain(sd, f, min_leaf), 1e-12);
  }
}

TEST(FitTree, SeparableOneDimensional) {
  const Dataset d = ToDataset({{{0}, {0.2}, {0.9}, {1}}, {L, L, H, H}}, 1);
  const DecisionTreeModel t = FitTree(d, FullTree());
  EXPECT_EQ(t.Depth(), 1);
  EXPECT_DOUBLE_EQ(TrainingAccuracy(Classifier(t), d), 1.0);
}

TEST(FitTree, StumpsCannotLearnXor) {
  const SmallData xor_data{{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 0}, {1, 1}}, {L, H, H, L, L, L}};
  const Dataset d = ToDataset(xor_data, 2);
  Hyperparams p = FullTree();
  p.max_depth = 1;
  const double acc = TrainingAccuracy(Classifier(FitTree(d, p)), d);
  // Enumerate every stump: one feature, one threshold, any leaf labels.
  double best_stump = 0.0;
  for (int f = 0; f < 2; ++f) {
    for (int left_high = 0; left_high < 2; ++left_high) {
      for (int right_high = 0; right_high < 2; ++right_high) {
        std::size_t ok = 0;
        for (std::size_t i = 0; i < xor_data.labels.size(); ++i) {
          const bool high = xor_data.values[i][f] <= 0.5 ? left_high : right_high;
          ok += (high ? H : L) == xor_data.labels[i];
        }
        best_stump = std::max(best_stump, ok / 6.0);
      }
    }
  }
  EXPECT_LE(acc, best_stump);
  const Dataset plain = ToDataset({{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {L, H, H, L}}, 2);
  EXPECT_LE(TrainingAccuracy(Classifier(FitTree(plain, p)), plain), 0.75);
}

TEST(FitTree, UnrestrictedTreeMemorizesConsistentData) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Dataset d = RandomSparse(seed, 120, 12);
    // Drop duplicate rows with conflicting labels to keep the data consistent.
    Dataset clean;
    clean.n_features = d.n_features;
    for (std::size_t i = 0; i < d.size(); ++i) {
      bool conflict = false;
      for (std::size_t j = 0; j < d.size(); ++j) {
        conflict |= d.rows[i] == d.rows[j] && d.labels[i] != d.labels[j];
      }
      if (!conflict) {
        clean.rows.push_back(d.rows[i]);
        clean.labels.push_back(d.labels[i]);
      }
    }
    const DecisionTreeModel t = FitTree(clean, FullTree());
    EXPECT_DOUBLE_EQ(TrainingAccuracy(Classifier(t), clean), 1.0);
  }
}

TEST(FitTree, RespectsHyperparameters) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset d = RandomSparse(trial, 80 + rng() % 80, 15);
    Hyperparams p;
    p.max_depth = 1 + static_cast<int>(rng() % 6);
    p.min_samples_split = 2 + static_cast<int>(rng() % 20);
    p.min_samples_leaf = 1 + static_cast<int>(rng() % 8);
    p.max_features = 0.2 + 0.8 * (rng() % 100) / 100.0;
    p.seed = trial;
    CheckTreeInvariants(FitTree(d, p), p);
    p.n_estimators = 3;
    const RandomForestModel forest = FitForest(d, p);
    for (const DecisionTreeModel& t : forest.trees()) CheckTreeInvariants(t, p);
  }
}

TEST(FitTree, EmptyDataIsAnError) {
  Dataset d;
  d.n_features = 2;
  EXPECT_THROW(FitTree(d, FullTree()), Error);
}

TEST(Predict, ConstantLeaf) {
  TreeNode leaf;
  leaf.counts = {1, 3};
  leaf.label = H;
  const DecisionTreeModel t({leaf}, Hyperparams{}, 4);
  EXPECT_EQ(t.Predict(SparseVector(4)), H);
  EXPECT_EQ(t.Predict(SparseVector::FromEntries(4, {{2, 9.0}})), H);
  EXPECT_THROW(t.Predict(SparseVector(3)), Error);
  EXPECT_EQ(t.Depth(), 0);
  EXPECT_DOUBLE_EQ(ComputeImportances(t).Sum(), 0.0);
}

DecisionTreeModel Leaf(Label y, std::size_t dim = 2) {
  TreeNode leaf;
  leaf.counts = y == H ? ClassCounts{0, 1} : ClassCounts{1, 0};
  leaf.label = y;
  return DecisionTreeModel({leaf}, Hyperparams{}, dim);
}

TEST(RandomForest, MajorityVoteAndTies) {
  const SparseVector x(2);
  EXPECT_EQ(RandomForestModel({Leaf(H), Leaf(H), Leaf(L)}, Hyperparams{}, 2).Predict(x), H);
  EXPECT_EQ(RandomForestModel({Leaf(H), Leaf(L)}, Hyperparams{}, 2).Predict(x), L);
  EXPECT_EQ(RandomForestModel({Leaf(L), Leaf(L)}, Hyperparams{}, 2).Predict(x), L);
  EXPECT_EQ(RandomForestModel({Leaf(H)}, Hyperparams{}, 2).Predict(x), H);
}

TEST(RandomForest, DegenerateForestEqualsTree) {
  const Dataset d = RandomSparse(4, 100, 10);
  Hyperparams p = FullTree();
  p.n_estimators = 1;
  p.seed = 9;
  const RandomForestModel f = FitForest(d, p);
  ASSERT_EQ(f.trees().size(), 1u);
  const DecisionTreeModel t = FitTree(d, p);
  EXPECT_TRUE(std::ranges::equal(f.trees()[0].nodes(), t.nodes()));
}

TEST(RandomForest, DeterministicAcrossThreadCounts) {
  const Dataset d = RandomSparse(6, 150, 20);
  Hyperparams p;
  p.max_features = 0.5;
  p.n_estimators = 12;
  p.seed = 3;
  const RandomForestModel a = FitForest(d, p, 1);
  const RandomForestModel b = FitForest(d, p, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, FitForest(d, p, 1));
  p.seed = 4;
  EXPECT_NE(a, FitForest(d, p, 1));
}

TEST(RandomForest, PermutingTreesKeepsPredictions) {
  const Dataset d = RandomSparse(7, 120, 10);
  Hyperparams p;
  p.n_estimators = 6;
  p.max_features = 0.5;
  const RandomForestModel f = FitForest(d, p);
  std::vector<DecisionTreeModel> trees(f.trees().begin(), f.trees().end());
  std::reverse(trees.begin(), trees.end());
  std::swap(trees[1], trees[4]);
  const RandomForestModel g(trees, p, d.n_features);
  for (const SparseVector& x : d.rows) EXPECT_EQ(f.Predict(x), g.Predict(x));
}

TEST(Importances, SingleSplitOnFeatureThree) {
  Dataset d;
  d.n_features = 5;
  for (int i = 0; i < 6; ++i) {
    const bool high = i >= 3;
    d.rows.push_back(high ? SparseVector::FromEntries(5, {{3, 1.0}}) : SparseVector(5));
    d.labels.push_back(high ? H : L);
  }
  const DecisionTreeModel t = FitTree(d, FullTree());
  const ImportanceVector imp = ComputeImportances(t);
  EXPECT_EQ(imp.values, (std::vector<double>{0, 0, 0, 1.0, 0}));
}

TEST(Importances, SumToOne) {
  const Dataset d = RandomSparse(12, 150, 15);
  Hyperparams p;
  p.n_estimators = 5;
  p.max_features = 0.6;
  EXPECT_NEAR(ComputeImportances(FitTree(d, p)).Sum(), 1.0, 1e-9);
  EXPECT_NEAR(ComputeImportances(FitForest(d, p)).Sum(), 1.0, 1e-9);
}

TEST(TopKFeatures, OnlyPositiveWeightsInOrder) {
  const Vocabulary v({{"a", 1, 1}, {"b", 1, 1}, {"c", 1, 1}, {"d", 1, 1}}, 1,
                     NgramLevel::kUnigram, PruneRule{});
  const ImportanceVector imp{{0.2, 0.0, 0.6, 0.2}};
  const TopFeatures top = TopKFeatures(imp, v, 10);
  ASSERT_EQ(top.features.size(), 3u);
  EXPECT_EQ(top.features[0].term, "c");
  EXPECT_EQ(top.features[1].term, "a");
  EXPECT_EQ(top.features[2].term, "d");
  EXPECT_EQ(top.nonzero_count, 3u);
  const TopFeatures one = TopKFeatures(imp, v, 1);
  ASSERT_EQ(one.features.size(), 1u);
  EXPECT_EQ(one.features[0].term, "c");
  EXPECT_THROW(TopKFeatures(imp, v, 0), Error);
  EXPECT_THROW(TopKFeatures(ImportanceVector{{1.0}}, v, 2), Error);
}

TEST(Hyperparams, CandidateCountAndValidation) {
  Hyperparams p;
  p.max_features = 0.9931;
  EXPECT_EQ(p.CandidateCount(1000), 994u);
  p.max_features = 0.001;
  EXPECT_EQ(p.CandidateCount(10), 1u);
  p.max_features = 1.0;
  EXPECT_EQ(p.CandidateCount(10), 10u);
  p.max_features = 0.0;
  EXPECT_THROW(p.Validate(), Error);
  const Hyperparams proposed = ProposedForestParams(5);
  EXPECT_EQ(proposed.max_depth, 22);
  EXPECT_EQ(proposed.min_samples_split, 67);
  EXPECT_EQ(proposed.min_samples_leaf, 11);
  EXPECT_EQ(proposed.n_estimators, 102);
  EXPECT_DOUBLE_EQ(proposed.max_features, 0.9931);
  EXPECT_EQ(proposed.seed, 5u);
}

TEST(ClassifierKind, Names) {
  EXPECT_EQ(ParseClassifierKind("rf"), ClassifierKind::kRandomForest);
  EXPECT_EQ(ParseClassifierKind("dt"), ClassifierKind::kDecisionTree);
  EXPECT_EQ(ParseClassifierKind(ToString(ClassifierKind::kRandomForest)),
            ClassifierKind::kRandomForest);
  EXPECT_THROW(ParseClassifierKind("svm"), Error);
}

TEST(Classifier, DispatchesToModel) {
  const Dataset d = RandomSparse(2, 100, 8);
  Hyperparams p;
  p.n_estimators = 4;
  const Classifier dt = Classifier::Fit(ClassifierKind::kDecisionTree, d, p);
  const Classifier rf = Classifier::Fit(ClassifierKind::kRandomForest, d, p);
  EXPECT_EQ(dt.kind(), ClassifierKind::kDecisionTree);
  EXPECT_NE(dt.tree(), nullptr);
  EXPECT_EQ(rf.kind(), ClassifierKind::kRandomForest);
  EXPECT_EQ(rf.forest()->trees().size(), 4u);
  EXPECT_EQ(rf.n_features(), 8u);
}

}  // namespace
}  // namespace grantmine
